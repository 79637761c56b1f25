#pragma once

#include <cstdint>
#include <random>

#include "maqa/qsim.hpp"

namespace maqa::gates {

qsim::CMatrix identity(std::size_t num_qubits);
qsim::CMatrix pauli_x();
qsim::CMatrix pauli_y();
qsim::CMatrix pauli_z();
qsim::CMatrix hadamard();
qsim::CMatrix projector_one();  // |1><1|

/// Ry(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
qsim::CMatrix ry(double theta);
/// Rz(t) = diag(e^{-it/2}, e^{+it/2})
qsim::CMatrix rz(double theta);

/// Dense num_qubits-wide embedding of X on `target` controlled by `control`.
qsim::CMatrix controlled_x(std::size_t num_qubits, std::size_t control,
                           std::size_t target);

/// Nearest-neighbor controlled-flip chain CX(0,1), CX(1,2), ... applied in
/// ascending order; identity for a single qubit.
qsim::CMatrix cx_ladder(std::size_t num_qubits);

/// Seeded generator built on the raw mt19937_64 stream so that draws are
/// identical across standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double gaussian();

    qsim::Complex complex_gaussian() { return {gaussian(), gaussian()}; }

    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Haar-ish random unitary: complex Gaussian matrix orthonormalized by
/// (twice-applied) modified Gram-Schmidt. Deterministic per Rng state.
qsim::CMatrix random_unitary(std::size_t num_qubits, Rng& rng);

/// Random Hermitian matrix (A + A')/2 with Gaussian A.
qsim::CMatrix random_hermitian(std::size_t num_qubits, Rng& rng);

std::vector<qsim::Complex> random_state_amps(std::size_t num_qubits, Rng& rng);

}  // namespace maqa::gates
