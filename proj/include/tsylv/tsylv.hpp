// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tsylv/dense_tensor.hpp"
#include "tsylv/errors.hpp"
#include "tsylv/generate.hpp"
#include "tsylv/matrix.hpp"
#include "tsylv/oracle.hpp"
#include "tsylv/solver.hpp"
#include "tsylv/tensor_ops.hpp"
