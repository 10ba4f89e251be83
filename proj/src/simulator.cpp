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

#include "qdisco/simulator.hpp"

#include <algorithm>
#include <bit>

#include "qdisco/random.hpp"

namespace qdisco {

void QaoaParams::validate() const {
    if (gammas.size() != betas.size()) {
        throw DimensionError("gammas and betas differ in length (" + std::to_string(gammas.size()) + " vs " +
                             std::to_string(betas.size()) + ")");
    }
    for (std::size_t l = 0; l < gammas.size(); ++l) {
        if (!std::isfinite(gammas[l]) || !std::isfinite(betas[l])) throw RangeError("non-finite QAOA angle");
    }
}

Eigen::VectorXd QaoaParams::packed() const {
    Eigen::VectorXd x(2 * layers());
    for (int l = 0; l < layers(); ++l) {
        x[2 * l] = gammas[static_cast<std::size_t>(l)];
        x[2 * l + 1] = betas[static_cast<std::size_t>(l)];
    }
    return x;
}

QaoaParams QaoaParams::unpack(const Eigen::VectorXd& x) {
    if (x.size() % 2 != 0) throw DimensionError("packed QAOA parameters must have even length");
    QaoaParams p;
    for (Eigen::Index i = 0; i < x.size(); i += 2) {
        p.gammas.push_back(x[i]);
        p.betas.push_back(x[i + 1]);
    }
    return p;
}

void ShotCounts::add(BasisIndex outcome, std::int64_t count) {
    if (count < 0) throw RangeError("negative shot count");
    if (count == 0) return;
    counts_[outcome] += count;
    total_ += count;
}

void ShotCounts::merge(const ShotCounts& other) {
    if (other.num_qubits_ != num_qubits_) throw DimensionError("cannot merge counts of different widths");
    for (const auto& [b, c] : other.counts_) add(b, c);
}

std::int64_t ShotCounts::count(BasisIndex outcome) const {
    auto it = counts_.find(outcome);
    return it == counts_.end() ? 0 : it->second;
}

std::string ShotCounts::bitstring(BasisIndex outcome) const {
    std::string s(static_cast<std::size_t>(num_qubits_), '0');
    for (int q = 0; q < num_qubits_; ++q) {
        if ((outcome >> q) & 1U) s[static_cast<std::size_t>(num_qubits_ - 1 - q)] = '1';
    }
    return s;
}

BasisIndex ShotCounts::parse_bitstring(const std::string& bits) const {
    if (static_cast<int>(bits.size()) != num_qubits_) throw ParseError("bitstring '" + bits + "' has wrong width");
    BasisIndex b = 0;
    for (int q = 0; q < num_qubits_; ++q) {
        const char c = bits[static_cast<std::size_t>(num_qubits_ - 1 - q)];
        if (c == '1') {
            b |= BasisIndex{1} << q;
        } else if (c != '0') {
            throw ParseError("bitstring '" + bits + "' contains a non-binary character");
        }
    }
    return b;
}

NoiseSpec NoiseSpec::from_qpu(const QpuModel& qpu, int trajectories) {
    NoiseSpec spec;
    spec.readout_flip = qpu.readout_error();
    spec.two_qubit_error.resize(static_cast<Eigen::Index>(qpu.couplings().size()));
    for (std::size_t i = 0; i < qpu.couplings().size(); ++i) {
        spec.two_qubit_error[static_cast<Eigen::Index>(i)] = qpu.couplings()[i].gate_error;
    }
    spec.trajectories = trajectories;
    spec.validate(qpu);
    return spec;
}

NoiseSpec NoiseSpec::noiseless(const QpuModel& qpu, int trajectories) {
    NoiseSpec spec;
    spec.readout_flip = Eigen::VectorXd::Zero(qpu.num_qubits());
    spec.two_qubit_error = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(qpu.couplings().size()));
    spec.trajectories = trajectories;
    return spec;
}

void NoiseSpec::validate(const QpuModel& qpu) const {
    if (trajectories < 1) throw RangeError("trajectories must be positive");
    if (readout_flip.size() != qpu.num_qubits()) throw DimensionError("readout noise does not cover every qubit");
    if (two_qubit_error.size() != static_cast<Eigen::Index>(qpu.couplings().size())) {
        throw DimensionError("gate noise does not cover every coupling");
    }
    auto in_range = [](double p) { return std::isfinite(p) && p >= 0.0 && p < 1.0; };
    for (Eigen::Index i = 0; i < readout_flip.size(); ++i) {
        if (!in_range(readout_flip[i])) throw RangeError("readout flip probability outside [0, 1)");
    }
    for (Eigen::Index i = 0; i < two_qubit_error.size(); ++i) {
        if (!in_range(two_qubit_error[i])) throw RangeError("two-qubit error probability outside [0, 1)");
    }
}

namespace {

std::vector<double> cumulative(const Eigen::VectorXd& probabilities) {
    std::vector<double> cdf(static_cast<std::size_t>(probabilities.size()));
    double acc = 0.0;
    for (Eigen::Index b = 0; b < probabilities.size(); ++b) {
        acc += std::max(0.0, probabilities[b]);
        cdf[static_cast<std::size_t>(b)] = acc;
    }
    return cdf;
}

BasisIndex draw(const std::vector<double>& cdf, Rng& rng) {
    const double u = uniform01(rng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    // upper_bound skips zero-mass outcomes: their cumulative value equals the previous entry's.
    if (it == cdf.end()) --it;
    return static_cast<BasisIndex>(it - cdf.begin());
}

}  // namespace

ShotCounts sample_probabilities(const Eigen::VectorXd& probabilities, int num_qubits, std::int64_t shots,
                                std::uint64_t seed) {
    if (shots <= 0) throw RangeError("shots must be positive");
    if (probabilities.size() != (Eigen::Index{1} << num_qubits)) throw DimensionError("probability vector width");
    const auto cdf = cumulative(probabilities);
    if (!(cdf.back() > 0.0)) throw RangeError("probability vector has no mass");
    Rng rng(derive_seed(seed, streams::kSample));
    ShotCounts counts(num_qubits);
    for (std::int64_t s = 0; s < shots; ++s) counts.add(draw(cdf, rng));
    return counts;
}

namespace {

// Gate-level executor for a placed cost layer. Works on the region-local register:
// bit j <-> j-th smallest physical qubit of the region.
class PlacedRunner {
   public:
    using Complex = std::complex<double>;

    PlacedRunner(const SpinPolynomial& poly, const Placement& placement, const QpuModel* qpu, const NoiseSpec* noise,
                 Rng* rng)
        : poly_(poly), placement_(placement), qpu_(qpu), noise_(noise), rng_(rng) {
        const auto& qubits = placement.region.qubits;
        for (std::size_t j = 0; j < qubits.size(); ++j) local_of_.emplace_back(qubits[j], static_cast<int>(j));
        layout_.resize(placement.initial_layout.size());
        for (std::size_t a = 0; a < layout_.size(); ++a) layout_[a] = local(placement.initial_layout[a]);
    }

    StateVectorXd run(const QaoaParams& params) {
        const int n = static_cast<int>(layout_.size());
        auto state = uniform_state<double>(n);
        for (int l = 0; l < params.layers(); ++l) {
            const double gamma = params.gammas[static_cast<std::size_t>(l)];
            state.amplitudes *= std::polar(1.0, -gamma * poly_.constant_offset());
            const auto& sched = placement_.schedule;
            if (l % 2 == 0) {
                for (const auto& step : sched) {
                    for (const auto& e : step.swaps) do_swap(state, e);
                    interact(state, step, gamma);
                }
            } else {
                for (auto it = sched.rbegin(); it != sched.rend(); ++it) {
                    interact(state, *it, gamma);
                    for (auto e = it->swaps.rbegin(); e != it->swaps.rend(); ++e) do_swap(state, *e);
                }
            }
            state = apply_mixer(std::move(state), params.betas[static_cast<std::size_t>(l)]);
        }
        return state;
    }

    std::vector<int> physical_layout() const {
        std::vector<int> out(layout_.size());
        for (std::size_t a = 0; a < layout_.size(); ++a) {
            out[a] = placement_.region.qubits[static_cast<std::size_t>(layout_[a])];
        }
        return out;
    }

   private:
    int local(int physical) const {
        for (const auto& [p, j] : local_of_) {
            if (p == physical) return j;
        }
        throw PlacementError("physical qubit " + std::to_string(physical) + " is not in the region");
    }

    void do_swap(StateVectorXd& state, const PhysicalEdge& e) {
        const int a = local(e.first), b = local(e.second);
        const Eigen::Index ba = Eigen::Index{1} << a, bb = Eigen::Index{1} << b;
        for (Eigen::Index i = 0; i < state.dim(); ++i) {
            if ((i & ba) && !(i & bb)) std::swap(state.amplitudes[i], state.amplitudes[(i & ~ba) | bb]);
        }
        for (int& p : layout_) {
            if (p == a) {
                p = b;
            } else if (p == b) {
                p = a;
            }
        }
        for (int rep = 0; rep < 3; ++rep) maybe_error(state, e);
    }

    void interact(StateVectorXd& state, const ScheduledInteraction& step, double gamma) {
        const auto& term = poly_.terms()[step.term_index];
        Eigen::Index mask = 0;
        for (int a : term.support) mask |= Eigen::Index{1} << layout_[static_cast<std::size_t>(a)];
        const Complex even = std::polar(1.0, -gamma * term.weight);
        const Complex odd = std::polar(1.0, gamma * term.weight);
        for (Eigen::Index i = 0; i < state.dim(); ++i) {
            state.amplitudes[i] *= (std::popcount(static_cast<std::uint64_t>(i & mask)) & 1) ? odd : even;
        }
        for (const auto& e : step.route) maybe_error(state, e);
    }

    void maybe_error(StateVectorXd& state, const PhysicalEdge& e) {
        if (!noise_) return;
        const auto idx = qpu_->coupling_index(e.first, e.second);
        if (!idx) throw PlacementError("scheduled edge is not a coupling of " + qpu_->name());
        const double p = noise_->two_qubit_error[static_cast<Eigen::Index>(*idx)];
        if (p <= 0.0 || uniform01(*rng_) >= p) return;
        const auto which = 1 + uniform_below(*rng_, 15);  // skip II
        apply_pauli(state, local(e.first), static_cast<int>(which / 4));
        apply_pauli(state, local(e.second), static_cast<int>(which % 4));
    }

    // 0 = I, 1 = X, 2 = Y, 3 = Z.
    static void apply_pauli(StateVectorXd& state, int q, int op) {
        if (op == 0) return;
        const Eigen::Index bit = Eigen::Index{1} << q;
        const Complex i1(0, 1);
        for (Eigen::Index b = 0; b < state.dim(); ++b) {
            if (b & bit) continue;
            Complex& a0 = state.amplitudes[b];
            Complex& a1 = state.amplitudes[b | bit];
            switch (op) {
                case 1: std::swap(a0, a1); break;
                case 2: {  // Y|0> = i|1>, Y|1> = -i|0>
                    const Complex n0 = -i1 * a1, n1 = i1 * a0;
                    a0 = n0;
                    a1 = n1;
                    break;
                }
                case 3: a1 = -a1; break;
            }
        }
    }

    const SpinPolynomial& poly_;
    const Placement& placement_;
    const QpuModel* qpu_;
    const NoiseSpec* noise_;
    Rng* rng_;
    std::vector<std::pair<int, int>> local_of_;
    std::vector<int> layout_;  // logical -> local
};

void check_placement_width(const SpinPolynomial& poly, const Placement& placement) {
    if (poly.num_spins() != placement.region.size() ||
        static_cast<int>(placement.initial_layout.size()) != poly.num_spins()) {
        throw PlacementError("placement width does not match the problem");
    }
}

}  // namespace

PlacedState simulate_placed(const SpinPolynomial& poly, const QaoaParams& params, const Placement& placement) {
    params.validate();
    check_placement_width(poly, placement);
    PlacedRunner runner(poly, placement, nullptr, nullptr, nullptr);
    PlacedState out;
    out.state = runner.run(params);
    out.final_layout = runner.physical_layout();
    return out;
}

Eigen::VectorXd logical_probabilities(const PlacedState& placed, const Placement& placement) {
    const auto& qubits = placement.region.qubits;
    const int n = placed.state.num_qubits;
    std::vector<int> local_of_logical(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const int phys = placed.final_layout[static_cast<std::size_t>(a)];
        local_of_logical[static_cast<std::size_t>(a)] =
            static_cast<int>(std::lower_bound(qubits.begin(), qubits.end(), phys) - qubits.begin());
    }
    const Eigen::VectorXd local = placed.state.probabilities();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(local.size());
    for (Eigen::Index b = 0; b < local.size(); ++b) {
        BasisIndex logical = 0;
        for (int a = 0; a < n; ++a) {
            if ((b >> local_of_logical[static_cast<std::size_t>(a)]) & 1) logical |= BasisIndex{1} << a;
        }
        out[static_cast<Eigen::Index>(logical)] += local[b];
    }
    return out;
}

ShotCounts noisy_sample(const SpinPolynomial& poly, const QaoaParams& params, const Placement& placement,
                        const QpuModel& qpu, const NoiseSpec& noise, std::int64_t shots, std::uint64_t seed) {
    if (shots <= 0) throw RangeError("shots must be positive");
    params.validate();
    validate_placement(placement, poly, qpu);
    noise.validate(qpu);

    const int n = poly.num_spins();
    const auto& qubits = placement.region.qubits;
    const auto traj = static_cast<std::int64_t>(noise.trajectories);
    ShotCounts counts(n);
    for (std::int64_t t = 0; t < traj; ++t) {
        const std::int64_t my_shots = shots / traj + (t < shots % traj ? 1 : 0);
        if (my_shots == 0) continue;
        Rng rng(derive_seed(seed, streams::kTrajectory, static_cast<std::uint64_t>(t)));
        PlacedRunner runner(poly, placement, &qpu, &noise, &rng);
        const auto state = runner.run(params);
        const auto layout = runner.physical_layout();
        std::vector<int> local_of_logical(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
            local_of_logical[static_cast<std::size_t>(a)] = static_cast<int>(
                std::lower_bound(qubits.begin(), qubits.end(), layout[static_cast<std::size_t>(a)]) - qubits.begin());
        }
        const auto cdf = cumulative(state.probabilities());
        for (std::int64_t s = 0; s < my_shots; ++s) {
            BasisIndex local = draw(cdf, rng);
            for (int j = 0; j < n; ++j) {
                const double flip = noise.readout_flip[qubits[static_cast<std::size_t>(j)]];
                if (flip > 0.0 && uniform01(rng) < flip) local ^= BasisIndex{1} << j;
            }
            BasisIndex logical = 0;
            for (int a = 0; a < n; ++a) {
                if ((local >> local_of_logical[static_cast<std::size_t>(a)]) & 1U) logical |= BasisIndex{1} << a;
            }
            counts.add(logical);
        }
    }
    return counts;
}

}  // namespace qdisco
