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

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdisco/compiler.hpp"
#include "qdisco/errors.hpp"
#include "qdisco/hardware.hpp"
#include "qdisco/problem.hpp"

namespace qdisco {

/// Dense n-qubit state; basis index b has qubit 0 as its least significant bit.
template <typename Scalar = double>
struct StateVector {
    using Complex = std::complex<Scalar>;
    using Amplitudes = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
    using Real = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    int num_qubits = 0;
    Amplitudes amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }
    Real probabilities() const { return amplitudes.cwiseAbs2(); }
    Scalar norm() const { return amplitudes.norm(); }

    static StateVector basis(int n, BasisIndex b) {
        StateVector s;
        s.num_qubits = n;
        s.amplitudes = Amplitudes::Zero(Eigen::Index{1} << n);
        s.amplitudes[static_cast<Eigen::Index>(b)] = Complex(1);
        return s;
    }
};

using StateVectorXd = StateVector<double>;

/// Angles of a depth-p ansatz; layer l applies gammas[l] then betas[l].
struct QaoaParams {
    std::vector<double> gammas;
    std::vector<double> betas;

    int layers() const noexcept { return static_cast<int>(gammas.size()); }
    void validate() const;
    /// Packed as (gamma_0, beta_0, gamma_1, beta_1, ...).
    Eigen::VectorXd packed() const;
    static QaoaParams unpack(const Eigen::VectorXd& x);

    bool operator==(const QaoaParams&) const = default;
};

/// Measurement histogram over n-bit outcomes.
class ShotCounts {
   public:
    ShotCounts() = default;
    explicit ShotCounts(int num_qubits) : num_qubits_(num_qubits) {}

    void add(BasisIndex outcome, std::int64_t count = 1);
    void merge(const ShotCounts& other);

    int num_qubits() const noexcept { return num_qubits_; }
    std::int64_t total() const noexcept { return total_; }
    std::int64_t count(BasisIndex outcome) const;
    const std::map<BasisIndex, std::int64_t>& counts() const noexcept { return counts_; }
    bool empty() const noexcept { return total_ == 0; }

    /// Outcome string, most significant qubit first (qubit 0 is the last character).
    std::string bitstring(BasisIndex outcome) const;
    BasisIndex parse_bitstring(const std::string& bits) const;

    bool operator==(const ShotCounts&) const = default;

   private:
    int num_qubits_ = 0;
    std::int64_t total_ = 0;
    std::map<BasisIndex, std::int64_t> counts_;
};

/// Channel strengths for trajectory simulation, indexed like the owning QpuModel:
/// one readout flip probability per qubit, one Pauli error probability per coupling.
struct NoiseSpec {
    Eigen::VectorXd readout_flip;
    Eigen::VectorXd two_qubit_error;
    int trajectories = 64;

    static NoiseSpec from_qpu(const QpuModel& qpu, int trajectories = 64);
    static NoiseSpec noiseless(const QpuModel& qpu, int trajectories = 64);
    void validate(const QpuModel& qpu) const;
};

// ---------------------------------------------------------------------------
// Noiseless statevector kernels.

template <typename Scalar = double>
StateVector<Scalar> uniform_state(int n) {
    if (n < 1 || n > kMaxDenseSpins) {
        throw CapacityError("statevector width must lie in [1, " + std::to_string(kMaxDenseSpins) + "], got " +
                            std::to_string(n));
    }
    StateVector<Scalar> s;
    s.num_qubits = n;
    const Eigen::Index dim = Eigen::Index{1} << n;
    s.amplitudes = StateVector<Scalar>::Amplitudes::Constant(dim, std::complex<Scalar>(std::pow(Scalar(2), -Scalar(n) / 2)));
    return s;
}

/// Multiplies amplitude b by exp(-i gamma C(b)) for a precomputed diagonal C.
template <typename Scalar, typename Derived>
StateVector<Scalar> apply_phase(StateVector<Scalar> state, const Eigen::MatrixBase<Derived>& diagonal, Scalar gamma) {
    if (diagonal.size() != state.dim()) throw DimensionError("cost diagonal does not match the state dimension");
    for (Eigen::Index b = 0; b < state.dim(); ++b) {
        state.amplitudes[b] *= std::polar(Scalar(1), -gamma * static_cast<Scalar>(diagonal[b]));
    }
    return state;
}

template <typename Scalar>
StateVector<Scalar> apply_phase(StateVector<Scalar> state, const SpinPolynomial& poly, Scalar gamma) {
    if (poly.num_spins() != state.num_qubits) {
        throw DimensionError("polynomial has " + std::to_string(poly.num_spins()) + " spins, state has " +
                             std::to_string(state.num_qubits) + " qubits");
    }
    return apply_phase(std::move(state), cost_diagonal(poly), gamma);
}

/// exp(-i beta X) on every qubit.
template <typename Scalar>
StateVector<Scalar> apply_mixer(StateVector<Scalar> state, Scalar beta) {
    using Complex = std::complex<Scalar>;
    const Complex c(std::cos(beta), 0);
    const Complex s(0, -std::sin(beta));
    const Eigen::Index dim = state.dim();
    for (int q = 0; q < state.num_qubits; ++q) {
        const Eigen::Index bit = Eigen::Index{1} << q;
        for (Eigen::Index b = 0; b < dim; ++b) {
            if (b & bit) continue;
            const Complex a0 = state.amplitudes[b];
            const Complex a1 = state.amplitudes[b | bit];
            state.amplitudes[b] = c * a0 + s * a1;
            state.amplitudes[b | bit] = s * a0 + c * a1;
        }
    }
    return state;
}

template <typename Scalar = double, typename Derived>
StateVector<Scalar> build_qaoa_state_from_diagonal(int n, const Eigen::MatrixBase<Derived>& diagonal,
                                                   const QaoaParams& params) {
    params.validate();
    auto state = uniform_state<Scalar>(n);
    for (int l = 0; l < params.layers(); ++l) {
        state = apply_phase(std::move(state), diagonal, static_cast<Scalar>(params.gammas[static_cast<std::size_t>(l)]));
        state = apply_mixer(std::move(state), static_cast<Scalar>(params.betas[static_cast<std::size_t>(l)]));
    }
    return state;
}

/// prod_{l=1..p} exp(-i beta_l M) exp(-i gamma_l C) |+>^n, layer 1 applied first.
template <typename Scalar = double>
StateVector<Scalar> build_qaoa_state(const SpinPolynomial& poly, const QaoaParams& params) {
    return build_qaoa_state_from_diagonal<Scalar>(poly.num_spins(), cost_diagonal(poly), params);
}

template <typename Scalar, typename Derived>
Scalar expectation(const StateVector<Scalar>& state, const Eigen::MatrixBase<Derived>& diagonal) {
    if (diagonal.size() != state.dim()) throw DimensionError("cost diagonal does not match the state dimension");
    return state.probabilities().dot(diagonal.template cast<Scalar>());
}

template <typename Scalar>
Scalar expectation(const StateVector<Scalar>& state, const SpinPolynomial& poly) {
    if (poly.num_spins() != state.num_qubits) throw DimensionError("polynomial / state width mismatch");
    return expectation(state, cost_diagonal(poly));
}

/// Noiseless <C> as a function of the angles, caching the cost diagonal.
class QaoaObjective {
   public:
    explicit QaoaObjective(const SpinPolynomial& poly) : n_(poly.num_spins()), diagonal_(cost_diagonal(poly)) {}

    double operator()(const QaoaParams& params) const {
        return expectation(build_qaoa_state_from_diagonal<double>(n_, diagonal_, params), diagonal_);
    }
    StateVectorXd state(const QaoaParams& params) const {
        return build_qaoa_state_from_diagonal<double>(n_, diagonal_, params);
    }
    const Eigen::VectorXd& diagonal() const noexcept { return diagonal_; }
    int num_qubits() const noexcept { return n_; }

   private:
    int n_;
    Eigen::VectorXd diagonal_;
};

// ---------------------------------------------------------------------------
// Measurement.

/// Draws `shots` outcomes from the given probabilities (need not be exactly normalized).
ShotCounts sample_probabilities(const Eigen::VectorXd& probabilities, int num_qubits, std::int64_t shots,
                                std::uint64_t seed);

template <typename Scalar>
ShotCounts sample(const StateVector<Scalar>& state, std::int64_t shots, std::uint64_t seed) {
    return sample_probabilities(state.probabilities().template cast<double>(), state.num_qubits, shots, seed);
}

// ---------------------------------------------------------------------------
// Execution on a placed region.

/// Result of running a placed circuit: the state lives on the region's qubits
/// (bit j = j-th smallest physical qubit) and `final_layout` maps logical qubits
/// to physical ones at measurement time.
struct PlacedState {
    StateVectorXd state;
    std::vector<int> final_layout;
};

/// Noiseless gate-level execution of the placed circuit, swaps included.
PlacedState simulate_placed(const SpinPolynomial& poly, const QaoaParams& params, const Placement& placement);

/// Reorders a region-local distribution into logical qubit order.
Eigen::VectorXd logical_probabilities(const PlacedState& placed, const Placement& placement);

/// Monte-Carlo trajectories: after every two-qubit interaction on coupling (i, j)
/// a uniformly random non-identity two-qubit Pauli strikes with probability e_ij
/// (three strikes' worth of chances per swap); each measured bit flips with its
/// readout probability. Outcomes are reported in logical qubit order.
ShotCounts noisy_sample(const SpinPolynomial& poly, const QaoaParams& params, const Placement& placement,
                        const QpuModel& qpu, const NoiseSpec& noise, std::int64_t shots, std::uint64_t seed);

}  // namespace qdisco
