// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tsylv/generate.hpp"
#include "tsylv/io.hpp"
#include "tsylv/oracle.hpp"
#include "tsylv/solver.hpp"

#ifndef TSYLV_DEFAULT_DATA_DIR
#define TSYLV_DEFAULT_DATA_DIR "data"
#endif

namespace {

using namespace tsylv;
using ordered_json = nlohmann::ordered_json;

enum Exit : int {
    kOk = 0,
    kUsage = 1,
    kInconsistent = 2,
    kIterationLimit = 3,
    kCheckFailed = 4,
};

int exit_for(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return kOk;
        case SolveStatus::Inconsistent: return kInconsistent;
        case SolveStatus::IterationLimit: return kIterationLimit;
    }
    return kUsage;
}

/// Key/value report: "key: value" lines, or one JSON object under --quiet.
class Report {
public:
    explicit Report(bool quiet) : quiet_(quiet) {}

    template <class T>
    void set(const std::string& key, T&& value) {
        j_[key] = std::forward<T>(value);
    }
    ordered_json& json() { return j_; }

    void print() const {
        if (quiet_) {
            std::cout << j_.dump() << '\n';
            return;
        }
        for (const auto& [k, v] : j_.items()) {
            std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
        }
    }

private:
    bool quiet_;
    ordered_json j_;
};

struct SolverFlags {
    std::optional<double> epsilon;
    std::optional<double> epsilon_p;
    std::optional<std::size_t> k_max;
    bool relative = false;

    void add(CLI::App& app) {
        app.add_option("--epsilon", epsilon, "Residual stopping tolerance");
        app.add_option("--epsilon-p", epsilon_p, "Direction-vanishing tolerance");
        app.add_option("--kmax", k_max, "Maximum number of iterations");
        app.add_flag("--relative-residual", relative, "Stop on ||R|| < epsilon * ||D||");
    }

    SolveOptions resolve(const std::optional<SolveOptions>& from_file) const {
        SolveOptions o = from_file.value_or(SolveOptions{});
        if (epsilon) o.epsilon = *epsilon;
        if (epsilon_p) o.epsilon_p = *epsilon_p;
        if (k_max) o.k_max = *k_max;
        if (relative) o.relative_residual = true;
        o.validate();
        return o;
    }
};

struct Common {
    std::string input;
    std::string out;
    std::string csv;
    bool quiet = false;
};

void report_outcome(Report& rep, const SolveOutcome& out) {
    rep.set("status", std::string(to_string(out.status)));
    rep.set("iterations", out.iterations);
    rep.set("final_residual", out.final_residual());
    rep.set("final_direction_norm", out.final_direction_norm);
}

void write_outputs(const Common& c, Report& rep, const DenseTensor& x,
                   const std::vector<double>& history) {
    if (!c.out.empty()) {
        io::write_tensor(x, c.out);
        rep.set("solution", c.out);
    }
    if (!c.csv.empty()) {
        io::write_residual_csv(history, c.csv);
        rep.set("residual_csv", c.csv);
    }
}

DenseTensor initial_iterate(const std::string& init, const SylvesterProblem& p) {
    if (init == "zero") return p.zero_unknown();
    constexpr std::string_view prefix = "file:";
    if (init.rfind(prefix, 0) == 0) {
        DenseTensor x = io::read_tensor(init.substr(prefix.size()));
        p.require_unknown_shape(x, "initial iterate");
        return x;
    }
    throw CLI::ValidationError("--init", "expected 'zero' or 'file:<path>', got '" + init + "'");
}

int cmd_solve(const Common& c, const SolverFlags& f, const std::string& init) {
    const io::ProblemFile pf = io::read_problem(c.input);
    const SolveOptions opts = f.resolve(pf.options);
    const SolveOutcome out = solve(pf.problem, initial_iterate(init, pf.problem), opts);
    Report rep(c.quiet);
    report_outcome(rep, out);
    write_outputs(c, rep, out.solution, out.residual_history);
    rep.print();
    return exit_for(out.status);
}

int cmd_nearness(const Common& c, const SolverFlags& f) {
    const io::ProblemFile pf = io::read_problem(c.input);
    if (!pf.x0) throw ParseError(c.input + ": missing field 'X0'");
    const SolveOptions opts = f.resolve(pf.options);
    const NearnessResult nr = solve_nearness(pf.problem, *pf.x0, opts);
    Report rep(c.quiet);
    report_outcome(rep, nr.outcome);
    rep.set("distance", nr.distance);
    write_outputs(c, rep, nr.x_hat, nr.outcome.residual_history);
    rep.print();
    return exit_for(nr.outcome.status);
}

int cmd_oracle(const Common& c, double rank_tol, std::size_t size_cap) {
    const io::ProblemFile pf = io::read_problem(c.input);
    const OracleResult o = oracle_solve(pf.problem, rank_tol, size_cap);
    Report rep(c.quiet);
    rep.set("consistent", o.consistent);
    rep.set("rank", o.numerical_rank);
    rep.set("unknowns", pf.problem.d().size());
    rep.set("residual_norm", o.residual_norm);
    if (!c.out.empty()) {
        io::write_tensor(o.min_norm_solution, c.out);
        rep.set("solution", c.out);
    }
    rep.print();
    return o.consistent ? kOk : kInconsistent;
}

int cmd_verify(const Common& c, const SolverFlags& f, std::optional<double> tol, double rank_tol,
               std::size_t size_cap) {
    const io::ProblemFile pf = io::read_problem(c.input);
    const SolveOptions opts = f.resolve(pf.options);
    const OracleResult o = oracle_solve(pf.problem, rank_tol, size_cap);
    const SolveOutcome s = solve_min_norm(pf.problem, opts);

    Report rep(c.quiet);
    rep.set("solver_status", std::string(to_string(s.status)));
    rep.set("solver_iterations", s.iterations);
    rep.set("oracle_consistent", o.consistent);
    rep.set("oracle_rank", o.numerical_rank);

    const bool solver_consistent = s.status == SolveStatus::Converged;
    bool agree = s.status != SolveStatus::IterationLimit && solver_consistent == o.consistent;
    if (agree && o.consistent) {
        const double dist = fro_norm(s.solution - o.min_norm_solution);
        const double limit = tol.value_or(1e-8 * std::max(1.0, fro_norm(o.min_norm_solution)));
        rep.set("distance", dist);
        rep.set("tolerance", limit);
        agree = dist <= limit;
    }
    rep.set("agree", agree);
    rep.print();
    return agree ? kOk : kCheckFailed;
}

Extents parse_extents(const std::string& text, const char* flag) {
    Extents e;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || item.empty() || v == 0 || item[0] == '-') {
            throw CLI::ValidationError(flag, "expected positive integers like 2,3, got '" +
                                                 text + "'");
        }
        e.push_back(static_cast<std::size_t>(v));
    }
    if (e.empty()) throw CLI::ValidationError(flag, "needs at least one extent");
    return e;
}

int cmd_gen(const std::string& i_text, const std::string& j_text, std::uint64_t seed,
            bool inconsistent, bool singular, const std::string& family, const std::string& out,
            bool quiet) {
    GenerateOptions opt;
    opt.row_extents = parse_extents(i_text, "--I");
    opt.col_extents = parse_extents(j_text, "--J");
    opt.seed = seed;
    opt.kind = inconsistent ? InstanceKind::Inconsistent : InstanceKind::Consistent;
    opt.singular = singular;
    opt.family = family == "spectral" ? InstanceFamily::Spectral : InstanceFamily::Uniform;
    const std::size_t mn = extent_product(opt.row_extents) * extent_product(opt.col_extents);
    if (mn > kDefaultOracleSizeCap) {
        throw SizeError("m*n = " + std::to_string(mn) + " exceeds the oracle cap of " +
                        std::to_string(kDefaultOracleSizeCap) + " needed for certification");
    }
    GeneratedInstance inst = generate_instance(opt);
    io::ProblemFile pf{std::move(inst.problem), std::nullopt, std::move(inst.x_exact),
                       std::nullopt};
    const std::string text = io::problem_to_json(pf).dump(1) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        io::write_text_file(out, text);
        if (!quiet) {
            std::cout << "wrote " << out << " (" << (inconsistent ? "inconsistent" : "consistent")
                      << ", attempts " << inst.attempts << ")\n";
        }
    }
    return kOk;
}

struct Check {
    std::string name;
    bool pass;
    double value;
    std::string band;
};

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

int cmd_repro(const std::string& data_dir, bool quiet) {
    namespace fs = std::filesystem;
    using clock = std::chrono::steady_clock;
    const fs::path dir(data_dir);
    std::vector<Check> checks;
    auto in_band = [](double v, double lo, double hi) { return v >= lo && v <= hi; };

    {
        const io::ProblemFile pf = io::read_problem(dir / "fixed_min_norm.json");
        const DenseTensor expected = io::read_tensor(dir / "fixed_min_norm_expected.json");
        const auto t0 = clock::now();
        const SolveOutcome out = solve_min_norm(pf.problem);
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        const double it = static_cast<double>(out.iterations);
        checks.push_back({"min_norm.converged", out.status == SolveStatus::Converged,
                          out.final_residual(), "status Converged"});
        checks.push_back({"min_norm.residual", out.final_residual() < 1e-10,
                          out.final_residual(), "< 1e-10"});
        checks.push_back({"min_norm.iterations", in_band(it, 71, 101), it, "86 +/- 15"});
        const double diff = max_abs_diff(out.solution, expected);
        checks.push_back({"min_norm.entries", diff <= 5e-4, diff, "<= 5e-4 abs"});
        checks.push_back({"min_norm.runtime_s", secs < 1.0, secs, "< 1"});
    }
    {
        const io::ProblemFile pf = io::read_problem(dir / "fixed_nearness.json");
        if (!pf.x0) throw ParseError("fixed_nearness.json: missing field 'X0'");
        const DenseTensor expected = io::read_tensor(dir / "fixed_nearness_expected.json");
        const auto t0 = clock::now();
        const NearnessResult nr = solve_nearness(pf.problem, *pf.x0);
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        const double it = static_cast<double>(nr.outcome.iterations);
        checks.push_back({"nearness.converged", nr.outcome.status == SolveStatus::Converged,
                          nr.outcome.final_residual(), "status Converged"});
        checks.push_back({"nearness.distance", std::abs(nr.distance - 640.2422) <= 1e-3,
                          nr.distance, "640.2422 +/- 1e-3"});
        checks.push_back({"nearness.iterations", in_band(it, 64, 94), it, "79 +/- 15"});
        const double diff = max_abs_diff(nr.x_hat, expected);
        checks.push_back({"nearness.entries", diff <= 5e-4, diff, "<= 5e-4 abs"});
        checks.push_back({"nearness.runtime_s", secs < 1.0, secs, "< 1"});
    }

    bool all = true;
    ordered_json arr = ordered_json::array();
    for (const Check& c : checks) {
        all = all && c.pass;
        if (quiet) {
            arr.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"band", c.band}});
        } else {
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " = "
                      << io::format_double(c.value) << " (" << c.band << ")\n";
        }
    }
    if (quiet) {
        std::cout << ordered_json{{"pass", all}, {"checks", arr}}.dump() << '\n';
    }
    return all ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sylvester tensor equation solver under the Einstein product"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "tsylv 0.1.0");

    Common common;
    SolverFlags flags;
    std::string init = "zero";
    std::optional<double> tol;
    double rank_tol = kDefaultRankTol;
    std::size_t size_cap = kDefaultOracleSizeCap;

    auto add_common = [&](CLI::App* sub, bool solution_out, bool csv_out) {
        sub->add_option("problem", common.input, "Problem file (JSON)")->required()
            ->check(CLI::ExistingFile);
        if (solution_out) sub->add_option("--out", common.out, "Write the solution tensor here");
        if (csv_out) sub->add_option("--csv", common.csv, "Write the residual history here");
        sub->add_flag("--quiet", common.quiet, "Machine-readable output only");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve from an initial iterate");
    add_common(solve_cmd, true, true);
    flags.add(*solve_cmd);
    solve_cmd->add_option("--init", init, "zero or file:<path>");

    CLI::App* near_cmd = app.add_subcommand("nearness", "Closest solution to the file's X0");
    add_common(near_cmd, true, true);
    flags.add(*near_cmd);

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Dense unfolded least-squares solve");
    add_common(oracle_cmd, true, false);
    oracle_cmd->add_option("--rank-tol", rank_tol, "Relative rank threshold");
    oracle_cmd->add_option("--size-cap", size_cap, "Largest m*n accepted");

    CLI::App* verify_cmd = app.add_subcommand("verify", "Compare the iteration with the oracle");
    add_common(verify_cmd, false, false);
    flags.add(*verify_cmd);
    verify_cmd->add_option("--tol", tol, "Frobenius distance tolerance");
    verify_cmd->add_option("--rank-tol", rank_tol, "Relative rank threshold");
    verify_cmd->add_option("--size-cap", size_cap, "Largest m*n accepted");

    std::string i_text, j_text, family = "uniform", gen_out;
    std::uint64_t seed = 1;
    bool consistent = false, inconsistent = false, singular = false;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a certified random problem");
    gen_cmd->add_option("--I", i_text, "Row extents, e.g. 2,3")->required();
    gen_cmd->add_option("--J", j_text, "Column extents, e.g. 2")->required();
    gen_cmd->add_option("--seed", seed, "Random seed");
    auto* c_flag = gen_cmd->add_flag("--consistent", consistent, "Consistent instance (default)");
    gen_cmd->add_flag("--inconsistent", inconsistent, "Certified inconsistent instance")
        ->excludes(c_flag);
    gen_cmd->add_flag("--singular", singular, "Rank-deficient operator (consistent instances)");
    gen_cmd->add_option("--family", family, "uniform or spectral")
        ->check(CLI::IsMember({"uniform", "spectral"}));
    gen_cmd->add_option("--out", gen_out, "Output path; stdout when omitted");
    gen_cmd->add_flag("--quiet", common.quiet, "Machine-readable output only");

    std::string data_dir = TSYLV_DEFAULT_DATA_DIR;
    CLI::App* repro_cmd = app.add_subcommand("repro", "Re-run the two fixed reference problems");
    repro_cmd->add_option("--data", data_dir, "Directory holding the fixed problem files");
    repro_cmd->add_flag("--quiet", common.quiet, "Machine-readable output only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve_cmd) return cmd_solve(common, flags, init);
        if (*near_cmd) return cmd_nearness(common, flags);
        if (*oracle_cmd) return cmd_oracle(common, rank_tol, size_cap);
        if (*verify_cmd) return cmd_verify(common, flags, tol, rank_tol, size_cap);
        if (*gen_cmd) {
            return cmd_gen(i_text, j_text, seed, inconsistent, singular, family, gen_out,
                           common.quiet);
        }
        if (*repro_cmd) return cmd_repro(data_dir, common.quiet);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
