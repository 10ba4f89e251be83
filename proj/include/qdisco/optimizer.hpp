// Copyright 2026 The qdisco Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qdisco/problem.hpp"
#include "qdisco/simulator.hpp"

namespace qdisco {

enum class OptimizerMethod { nelder_mead, grid_then_nelder_mead };

OptimizerMethod parse_optimizer_method(std::string_view name);
std::string to_string(OptimizerMethod method);

struct OptimizerConfig {
    OptimizerMethod method = OptimizerMethod::grid_then_nelder_mead;
    int max_evaluations = 500;
    /// Stop once max f - min f over the simplex drops below this.
    double tolerance = 1e-6;
    /// Starting point; when absent the start comes from the grid scan or a seeded draw.
    std::optional<QaoaParams> initial;
    /// Points per axis of the p = 1 scan over gamma in [0, 2pi), beta in [0, pi).
    int grid_resolution = 16;
    double initial_step = 0.25;
    std::uint64_t seed = 0;
    /// Stochastic evaluator: re-measure the incumbent every 10 iterations.
    bool noisy = false;

    void validate() const;
};

struct TraceEntry {
    QaoaParams params;
    double value = 0.0;

    bool operator==(const TraceEntry&) const = default;
};

struct OptimizationTrace {
    std::vector<TraceEntry> entries;
    QaoaParams best_params;
    double best_value = 0.0;
    int evaluations = 0;
    bool converged = false;
    /// Set when the evaluator returned a non-finite value; the run stops there.
    std::optional<std::string> error;

    bool ok() const noexcept { return !error.has_value(); }
    bool operator==(const OptimizationTrace&) const = default;
};

using Evaluator = std::function<double(const QaoaParams&)>;

/// Nelder-Mead over the 2p angles (coefficients 1, 2, 0.5, 0.5).
OptimizationTrace optimize(int p, const Evaluator& evaluator, const OptimizerConfig& cfg);

/// Noiseless expectation of `poly` as the evaluator.
OptimizationTrace optimize(const SpinPolynomial& poly, int p, const OptimizerConfig& cfg);

}  // namespace qdisco
