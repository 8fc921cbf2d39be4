// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cerrno>
#include <charconv>
#include <cstring>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "tsylv/dense_tensor.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/solver.hpp"

namespace tsylv::io {

using nlohmann::json;

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("cannot format number");
    return std::string(buf, ptr);
}

inline json tensor_to_json(const DenseTensor& t) {
    json j;
    j["row_extents"] = t.row_extents();
    j["col_extents"] = t.col_extents();
    j["data"] = std::vector<double>(t.data().begin(), t.data().end());
    return j;
}

namespace detail {

inline Extents read_extents(const json& j, const std::string& ctx, const char* key) {
    if (!j.contains(key)) throw ParseError(ctx + ": missing field '" + key + "'");
    const json& arr = j.at(key);
    if (!arr.is_array()) throw ParseError(ctx + "." + key + ": expected an array");
    Extents out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_integer() || arr[i].get<long long>() < 1) {
            throw ParseError(ctx + "." + key + "[" + std::to_string(i) +
                             "]: expected a positive integer");
        }
        out.push_back(arr[i].get<std::size_t>());
    }
    return out;
}

}  // namespace detail

/// Parses {"row_extents": [...], "col_extents": [...], "data": [...]}.
/// `ctx` names the object in error messages.
inline DenseTensor tensor_from_json(const json& j, const std::string& ctx = "tensor") {
    if (!j.is_object()) throw ParseError(ctx + ": expected an object");
    Extents rows = detail::read_extents(j, ctx, "row_extents");
    Extents cols = detail::read_extents(j, ctx, "col_extents");
    if (!j.contains("data")) throw ParseError(ctx + ": missing field 'data'");
    const json& arr = j.at("data");
    if (!arr.is_array()) throw ParseError(ctx + ".data: expected an array");
    std::vector<double> data;
    data.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) {
            throw ParseError(ctx + ".data[" + std::to_string(i) + "]: expected a number");
        }
        data.push_back(arr[i].get<double>());
    }
    try {
        return DenseTensor(std::move(rows), std::move(cols), std::move(data));
    } catch (const DimensionError& e) {
        throw DimensionError(ctx + ": " + e.what());
    }
}

inline json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing: " +
                                 std::strerror(errno));
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline DenseTensor read_tensor(const std::filesystem::path& path) {
    return tensor_from_json(parse_json_file(path), path.string());
}

inline void write_tensor(const DenseTensor& t, const std::filesystem::path& path) {
    write_text_file(path, tensor_to_json(t).dump(1) + "\n");
}

/// A, C, D plus the optional nearness target X0, the generating solution
/// X_exact (written by instance generation) and solver options.
struct ProblemFile {
    SylvesterProblem problem;
    std::optional<DenseTensor> x0;
    std::optional<DenseTensor> x_exact;
    std::optional<SolveOptions> options;
};

inline json problem_to_json(const ProblemFile& pf) {
    json j;
    j["A"] = tensor_to_json(pf.problem.a());
    j["C"] = tensor_to_json(pf.problem.c());
    j["D"] = tensor_to_json(pf.problem.d());
    if (pf.x0) j["X0"] = tensor_to_json(*pf.x0);
    if (pf.x_exact) j["X_exact"] = tensor_to_json(*pf.x_exact);
    if (pf.options) {
        j["options"] = {{"epsilon", pf.options->epsilon},
                        {"epsilon_p", pf.options->epsilon_p},
                        {"k_max", pf.options->k_max}};
    }
    return j;
}

inline SolveOptions options_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ParseError(ctx + ": expected an object");
    SolveOptions o;
    for (const auto& [key, val] : j.items()) {
        if (key == "epsilon" || key == "epsilon_p") {
            if (!val.is_number()) throw ParseError(ctx + "." + key + ": expected a number");
            (key == "epsilon" ? o.epsilon : o.epsilon_p) = val.get<double>();
        } else if (key == "k_max") {
            if (!val.is_number_integer() || val.get<long long>() < 1)
                throw ParseError(ctx + ".k_max: expected a positive integer");
            o.k_max = val.get<std::size_t>();
        } else {
            throw ParseError(ctx + ": unknown option '" + key + "'");
        }
    }
    try {
        o.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(ctx + ": " + e.what());
    }
    return o;
}

inline ProblemFile problem_from_json(const json& j, const std::string& ctx = "problem") {
    if (!j.is_object()) throw ParseError(ctx + ": expected an object");
    for (const char* key : {"A", "C", "D"}) {
        if (!j.contains(key)) throw ParseError(ctx + ": missing field '" + key + "'");
    }
    auto field = [&](const char* key) {
        return tensor_from_json(j.at(key), ctx + "." + key);
    };
    ProblemFile pf{SylvesterProblem(field("A"), field("C"), field("D")), {}, {}, {}};
    if (j.contains("X0")) {
        pf.x0 = field("X0");
        pf.problem.require_unknown_shape(*pf.x0, "X0");
    }
    if (j.contains("X_exact")) {
        pf.x_exact = field("X_exact");
        pf.problem.require_unknown_shape(*pf.x_exact, "X_exact");
    }
    if (j.contains("options")) pf.options = options_from_json(j.at("options"), ctx + ".options");
    return pf;
}

inline ProblemFile read_problem(const std::filesystem::path& path) {
    return problem_from_json(parse_json_file(path), path.string());
}

inline void write_problem(const ProblemFile& pf, const std::filesystem::path& path) {
    write_text_file(path, problem_to_json(pf).dump(1) + "\n");
}

/// "k,res" header, then one row per recorded residual, k from 1, LF endings.
inline std::string format_residual_csv(std::span<const double> history) {
    if (history.empty()) throw std::invalid_argument("residual history is empty");
    std::string out = "k,res\n";
    for (std::size_t k = 0; k < history.size(); ++k) {
        out += std::to_string(k + 1);
        out += ',';
        out += format_double(history[k]);
        out += '\n';
    }
    return out;
}

inline void write_residual_csv(std::span<const double> history,
                               const std::filesystem::path& path) {
    write_text_file(path, format_residual_csv(history));
}

}  // namespace tsylv::io
