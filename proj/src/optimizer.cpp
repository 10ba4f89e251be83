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

#include "qdisco/optimizer.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qdisco/errors.hpp"
#include "qdisco/random.hpp"

namespace qdisco {

OptimizerMethod parse_optimizer_method(std::string_view name) {
    if (name == "nelder_mead") return OptimizerMethod::nelder_mead;
    if (name == "grid_then_nelder_mead") return OptimizerMethod::grid_then_nelder_mead;
    throw SchemaError("method", "unknown optimizer method '" + std::string(name) + "'");
}

std::string to_string(OptimizerMethod method) {
    return method == OptimizerMethod::nelder_mead ? "nelder_mead" : "grid_then_nelder_mead";
}

void OptimizerConfig::validate() const {
    if (max_evaluations < 1) throw RangeError("max_evaluations must be at least 1");
    if (!(tolerance > 0.0)) throw RangeError("tolerance must be positive");
    if (grid_resolution < 1) throw RangeError("grid_resolution must be at least 1");
    if (!(initial_step > 0.0)) throw RangeError("initial_step must be positive");
}

namespace {

struct BudgetExhausted {};
struct NonFinite {};

// Counts evaluations, records the trace and enforces the budget.
class Counter {
   public:
    Counter(const Evaluator& f, int budget, OptimizationTrace& trace) : f_(f), budget_(budget), trace_(trace) {}

    double operator()(const Eigen::VectorXd& x) {
        if (trace_.evaluations >= budget_) throw BudgetExhausted{};
        QaoaParams params = QaoaParams::unpack(x);
        ++trace_.evaluations;
        const double v = f_(params);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "non-finite objective value at evaluation " << trace_.evaluations;
            trace_.error = msg.str();
            throw NonFinite{};
        }
        if (trace_.entries.empty() || v < trace_.best_value) {
            trace_.best_value = v;
            trace_.best_params = params;
        }
        trace_.entries.push_back(TraceEntry{std::move(params), v});
        return v;
    }

   private:
    const Evaluator& f_;
    int budget_;
    OptimizationTrace& trace_;
};

Eigen::VectorXd grid_start(Counter& eval, int p, int resolution) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double best = std::numeric_limits<double>::infinity();
    double g_best = 0.0, b_best = 0.0;
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            const double g = kTwoPi * i / resolution;
            const double b = std::numbers::pi * j / resolution;
            // Zero angles in the extra layers act as the identity.
            Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * p);
            x[0] = g;
            x[1] = b;
            const double v = eval(x);
            if (v < best) {
                best = v;
                g_best = g;
                b_best = b;
            }
        }
    }
    Eigen::VectorXd x(2 * p);
    if (p == 1) {
        x << g_best, b_best;
        return x;
    }
    // Deeper circuits: repeat the p = 1 angles, or ramp gamma up and beta down; keep the better.
    Eigen::VectorXd ramp(2 * p);
    for (int l = 0; l < p; ++l) {
        x[2 * l] = g_best;
        x[2 * l + 1] = b_best;
        ramp[2 * l] = g_best * (l + 1) / p;
        ramp[2 * l + 1] = b_best * (p - l) / p;
    }
    return eval(ramp) < eval(x) ? ramp : x;
}

void nelder_mead(Counter& eval, Eigen::VectorXd x0, const OptimizerConfig& cfg, OptimizationTrace& trace) {
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
    const auto d = x0.size();
    std::vector<Eigen::VectorXd> simplex;
    std::vector<double> f;
    simplex.push_back(x0);
    f.push_back(eval(x0));
    for (Eigen::Index i = 0; i < d; ++i) {
        Eigen::VectorXd v = x0;
        v[i] += cfg.initial_step;
        simplex.push_back(v);
        f.push_back(eval(v));
    }
    std::vector<std::size_t> order(simplex.size());
    for (long iter = 1;; ++iter) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t lo = order.front(), hi = order.back(), second = order[order.size() - 2];
        if (f[hi] - f[lo] < cfg.tolerance) {
            trace.converged = true;
            return;
        }
        if (cfg.noisy && iter % 10 == 0) {
            f[lo] = eval(simplex[lo]);
            continue;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i != hi) centroid += simplex[i];
        }
        centroid /= static_cast<double>(d);

        const Eigen::VectorXd xr = centroid + kReflect * (centroid - simplex[hi]);
        const double fr = eval(xr);
        if (fr < f[lo]) {
            const Eigen::VectorXd xe = centroid + kExpand * (xr - centroid);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[hi] = xe;
                f[hi] = fe;
            } else {
                simplex[hi] = xr;
                f[hi] = fr;
            }
            continue;
        }
        if (fr < f[second]) {
            simplex[hi] = xr;
            f[hi] = fr;
            continue;
        }
        const bool outside = fr < f[hi];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + kContract * (xr - centroid))
                                           : Eigen::VectorXd(centroid + kContract * (simplex[hi] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : f[hi])) {
            simplex[hi] = xc;
            f[hi] = fc;
            continue;
        }
        for (std::size_t i = 0; i < simplex.size(); ++i) {
            if (i == lo) continue;
            simplex[i] = simplex[lo] + kShrink * (simplex[i] - simplex[lo]);
            f[i] = eval(simplex[i]);
        }
    }
}

}  // namespace

OptimizationTrace optimize(int p, const Evaluator& evaluator, const OptimizerConfig& cfg) {
    if (p < 1) throw InvalidSizeError("layer count must be at least 1");
    cfg.validate();
    if (cfg.initial) {
        cfg.initial->validate();
        if (cfg.initial->layers() != p) throw DimensionError("initial angles have the wrong layer count");
    }
    OptimizationTrace trace;
    trace.best_value = std::numeric_limits<double>::infinity();
    Counter eval(evaluator, cfg.max_evaluations, trace);
    try {
        Eigen::VectorXd x0;
        if (cfg.initial) {
            x0 = cfg.initial->packed();
        } else if (cfg.method == OptimizerMethod::grid_then_nelder_mead) {
            x0 = grid_start(eval, p, cfg.grid_resolution);
        } else {
            Rng rng(derive_seed(cfg.seed, streams::kOptimizerInit));
            x0.resize(2 * p);
            for (int l = 0; l < p; ++l) {
                x0[2 * l] = uniform_in(rng, 0.0, 2.0 * std::numbers::pi);
                x0[2 * l + 1] = uniform_in(rng, 0.0, std::numbers::pi);
            }
        }
        nelder_mead(eval, std::move(x0), cfg, trace);
    } catch (const BudgetExhausted&) {
    } catch (const NonFinite&) {
    }
    return trace;
}

OptimizationTrace optimize(const SpinPolynomial& poly, int p, const OptimizerConfig& cfg) {
    const QaoaObjective objective(poly);
    return optimize(p, [&](const QaoaParams& params) { return objective(params); }, cfg);
}

}  // namespace qdisco
