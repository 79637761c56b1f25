#include "maqa/gates.hpp"

#include <cmath>
#include <numbers>

namespace maqa::gates {

using qsim::CMatrix;
using qsim::Complex;

CMatrix identity(std::size_t num_qubits) {
    return CMatrix::identity(std::size_t{1} << num_qubits);
}

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m(0, 1) = {1.0, 0.0};
    m(1, 0) = {1.0, 0.0};
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m(0, 1) = {0.0, -1.0};
    m(1, 0) = {0.0, 1.0};
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m(0, 0) = {1.0, 0.0};
    m(1, 1) = {-1.0, 0.0};
    return m;
}

CMatrix hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix m(2, 2);
    m(0, 0) = {s, 0.0};
    m(0, 1) = {s, 0.0};
    m(1, 0) = {s, 0.0};
    m(1, 1) = {-s, 0.0};
    return m;
}

CMatrix projector_one() {
    CMatrix m(2, 2);
    m(1, 1) = {1.0, 0.0};
    return m;
}

CMatrix ry(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    CMatrix m(2, 2);
    m(0, 0) = {c, 0.0};
    m(0, 1) = {-s, 0.0};
    m(1, 0) = {s, 0.0};
    m(1, 1) = {c, 0.0};
    return m;
}

CMatrix rz(double theta) {
    CMatrix m(2, 2);
    m(0, 0) = std::exp(Complex{0.0, -theta / 2.0});
    m(1, 1) = std::exp(Complex{0.0, theta / 2.0});
    return m;
}

CMatrix controlled_x(std::size_t num_qubits, std::size_t control, std::size_t target) {
    if (control >= num_qubits || target >= num_qubits || control == target)
        throw std::invalid_argument("bad control/target for controlled_x");
    const std::size_t dim = std::size_t{1} << num_qubits;
    const std::size_t cbit = std::size_t{1} << (num_qubits - 1 - control);
    const std::size_t tbit = std::size_t{1} << (num_qubits - 1 - target);
    CMatrix m(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t i = (j & cbit) ? (j ^ tbit) : j;
        m(i, j) = {1.0, 0.0};
    }
    return m;
}

CMatrix cx_ladder(std::size_t num_qubits) {
    CMatrix m = identity(num_qubits);
    for (std::size_t k = 0; k + 1 < num_qubits; ++k)
        m = qsim::matmul(controlled_x(num_qubits, k, k + 1), m);
    return m;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

CMatrix random_unitary(std::size_t num_qubits, Rng& rng) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    CMatrix m(dim, dim);
    for (auto& entry : m.a) entry = rng.complex_gaussian();

    // Column-wise modified Gram-Schmidt, run twice to push the residual
    // orthogonality error to rounding level.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < dim; ++c) {
            for (std::size_t k = 0; k < c; ++k) {
                Complex overlap{0.0, 0.0};
                for (std::size_t r = 0; r < dim; ++r)
                    overlap += std::conj(m(r, k)) * m(r, c);
                for (std::size_t r = 0; r < dim; ++r) m(r, c) -= overlap * m(r, k);
            }
            double norm = 0.0;
            for (std::size_t r = 0; r < dim; ++r) norm += std::norm(m(r, c));
            norm = std::sqrt(norm);
            for (std::size_t r = 0; r < dim; ++r) m(r, c) /= norm;
        }
    }
    return m;
}

CMatrix random_hermitian(std::size_t num_qubits, Rng& rng) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    CMatrix a(dim, dim);
    for (auto& entry : a.a) entry = rng.complex_gaussian();
    const CMatrix at = qsim::adjoint(a);
    CMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim * dim; ++i) m.a[i] = 0.5 * (a.a[i] + at.a[i]);
    return m;
}

std::vector<Complex> random_state_amps(std::size_t num_qubits, Rng& rng) {
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    double norm = 0.0;
    for (auto& a : amps) {
        a = rng.complex_gaussian();
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
    return amps;
}

}  // namespace maqa::gates
