#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex linear algebra and qubit-register gate application.
//
// Register layout, fixed for the whole repository: qubit 0 holds the MOST
// significant bit of a basis index. A register made of d control qubits
// followed by n data qubits therefore stores the control bitstring h in the
// top d bits, so basis index = h * 2^n + data_index. Round-tripping between
// an index and its bits is exact by construction.

namespace maqa::qsim {

using Complex = std::complex<double>;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
inline constexpr std::size_t kMaxQubits = 20;  // dense-simulation register cap

class NonUnitaryError : public std::invalid_argument {
public:
    explicit NonUnitaryError(double deviation)
        : std::invalid_argument("matrix is not unitary (max |U'U - I| = " +
                                std::to_string(deviation) + ")"),
          deviation_(deviation) {}
    double deviation() const { return deviation_; }

private:
    double deviation_;
};

class NonHermitianError : public std::invalid_argument {
public:
    explicit NonHermitianError(double deviation)
        : std::invalid_argument("matrix is not Hermitian (max |M - M'| = " +
                                std::to_string(deviation) + ")"),
          deviation_(deviation) {}
    double deviation() const { return deviation_; }

private:
    double deviation_;
};

/// Row-major complex matrix. Plain storage; validation happens in the
/// gate/observable wrappers below.
struct CMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> a;

    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    Complex& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    static CMatrix identity(std::size_t dim);
};

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& m);
std::vector<Complex> matvec(const CMatrix& m, const std::vector<Complex>& v);

bool all_finite(const std::vector<Complex>& v);

/// Max-entry deviation of U'U from the identity.
double unitary_deviation(const CMatrix& m);
/// Max-entry deviation of M from its adjoint.
double hermitian_deviation(const CMatrix& m);

/// Returns the deviation (the unitarity certificate) when it is within
/// kUnitaryTol; throws NonUnitaryError carrying the deviation otherwise.
double validate_unitary(const CMatrix& m);
double validate_hermitian(const CMatrix& m);

/// Square complex matrix on dim_qubits qubits, checked unitary at construction.
class UnitaryGate {
public:
    explicit UnitaryGate(CMatrix m);

    std::size_t dim_qubits() const { return dim_qubits_; }
    std::size_t dim() const { return matrix_.rows; }
    const CMatrix& matrix() const { return matrix_; }

private:
    std::size_t dim_qubits_;
    CMatrix matrix_;
};

/// Hermitian measurement operator on dim_qubits qubits.
class Observable {
public:
    explicit Observable(CMatrix m);

    std::size_t dim_qubits() const { return dim_qubits_; }
    std::size_t dim() const { return matrix_.rows; }
    const CMatrix& matrix() const { return matrix_; }

private:
    std::size_t dim_qubits_;
    CMatrix matrix_;
};

/// Normalized amplitude vector over 2^num_qubits basis states. Immutable
/// after construction; every operation below returns a fresh value.
class StateVector {
public:
    StateVector(std::size_t num_qubits, std::vector<Complex> amps);

    static StateVector computational_zero(std::size_t num_qubits);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<Complex>& amps() const { return amps_; }
    double norm() const;

private:
    std::size_t num_qubits_;
    std::vector<Complex> amps_;
};

/// Applies u to the listed qubits; targets[0] is the most significant qubit
/// of the gate's own index space, matching kron order.
StateVector apply_unitary(const StateVector& state, const UnitaryGate& u,
                          const std::vector<std::size_t>& targets);

/// Applies u to the targets only on the amplitudes whose control qubit equals
/// control_value; all other amplitudes pass through untouched.
StateVector apply_controlled(const StateVector& state, std::size_t control,
                             int control_value, const UnitaryGate& u,
                             const std::vector<std::size_t>& targets);

/// Re<state| (I ⊗ M) |state> with M acting on the bottom n_data qubits.
/// The imaginary residue of the inner sum must stay below kNormTol.
double expectation_on_data(const StateVector& state, const Observable& m,
                           std::size_t n_data);

}  // namespace maqa::qsim
