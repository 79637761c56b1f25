#include "maqa/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maqa::qsim {

namespace {

// Insert a zero bit at LSB-based position pos, shifting higher bits up.
std::size_t insert_zero_bit(std::size_t x, std::size_t pos) {
    const std::size_t low = x & ((std::size_t{1} << pos) - 1);
    return ((x >> pos) << (pos + 1)) | low;
}

bool is_power_of_two(std::size_t x) { return x != 0 && (x & (x - 1)) == 0; }

std::size_t log2_exact(std::size_t x) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < x) ++k;
    return k;
}

// LSB-based bit positions for a target list, validated against the register.
std::vector<std::size_t> target_positions(std::size_t num_qubits,
                                          const std::vector<std::size_t>& targets) {
    std::vector<std::size_t> pos(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (targets[k] >= num_qubits)
            throw std::out_of_range("target qubit " + std::to_string(targets[k]) +
                                    " out of range for " + std::to_string(num_qubits) +
                                    "-qubit register");
        pos[k] = num_qubits - 1 - targets[k];
    }
    std::vector<std::size_t> sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("duplicate target qubit");
    return pos;
}

// Scatter offsets: gate-local index g -> contribution to the full register
// index, honoring targets[0] = most significant gate qubit.
std::vector<std::size_t> scatter_table(const std::vector<std::size_t>& pos) {
    const std::size_t k = pos.size();
    std::vector<std::size_t> table(std::size_t{1} << k, 0);
    for (std::size_t g = 0; g < table.size(); ++g) {
        std::size_t idx = 0;
        for (std::size_t b = 0; b < k; ++b)
            if ((g >> (k - 1 - b)) & 1) idx |= std::size_t{1} << pos[b];
        table[g] = idx;
    }
    return table;
}

// Applies the gate block-wise; include_block(base) decides whether a block
// is touched (controlled application passes a control-bit predicate).
template <typename Pred>
std::vector<Complex> blockwise_apply(const StateVector& state, const CMatrix& u,
                                     const std::vector<std::size_t>& pos,
                                     Pred include_block) {
    const std::size_t nq = state.num_qubits();
    const std::size_t k = pos.size();
    const std::size_t gate_dim = std::size_t{1} << k;

    std::vector<std::size_t> sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    const auto scatter = scatter_table(pos);

    std::vector<Complex> out = state.amps();
    std::vector<Complex> cache(gate_dim);
    const std::size_t num_blocks = std::size_t{1} << (nq - k);
    for (std::size_t j = 0; j < num_blocks; ++j) {
        std::size_t base = j;
        for (std::size_t p : sorted) base = insert_zero_bit(base, p);
        if (!include_block(base)) continue;
        for (std::size_t g = 0; g < gate_dim; ++g) cache[g] = out[base | scatter[g]];
        for (std::size_t g = 0; g < gate_dim; ++g) {
            Complex acc{0.0, 0.0};
            for (std::size_t l = 0; l < gate_dim; ++l) acc += u(g, l) * cache[l];
            out[base | scatter[g]] = acc;
        }
    }
    return out;
}

}  // namespace

CMatrix CMatrix::identity(std::size_t dim) {
    CMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = Complex{1.0, 0.0};
    return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    if (a.rows == 0 || a.cols == 0 || b.rows == 0 || b.cols == 0)
        throw std::invalid_argument("kron of empty matrix");
    CMatrix out(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const Complex f = a(i, j);
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l)
                    out(i * b.rows + k, j * b.cols + l) = f * b(k, l);
        }
    return out;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul dimension mismatch");
    CMatrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < a.cols; ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

CMatrix adjoint(const CMatrix& m) {
    CMatrix out(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

std::vector<Complex> matvec(const CMatrix& m, const std::vector<Complex>& v) {
    if (m.cols != v.size()) throw std::invalid_argument("matvec dimension mismatch");
    std::vector<Complex> out(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < m.cols; ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

bool all_finite(const std::vector<Complex>& v) {
    for (const Complex& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

double unitary_deviation(const CMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("unitary check needs a square matrix");
    const CMatrix prod = matmul(adjoint(m), m);
    double dev = 0.0;
    for (std::size_t i = 0; i < prod.rows; ++i)
        for (std::size_t j = 0; j < prod.cols; ++j) {
            const Complex expect = (i == j) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            dev = std::max(dev, std::abs(prod(i, j) - expect));
        }
    return dev;
}

double hermitian_deviation(const CMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("hermitian check needs a square matrix");
    double dev = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
    return dev;
}

double validate_unitary(const CMatrix& m) {
    if (!all_finite(m.a)) throw std::invalid_argument("matrix has non-finite entries");
    const double dev = unitary_deviation(m);
    if (dev > kUnitaryTol) throw NonUnitaryError(dev);
    return dev;
}

double validate_hermitian(const CMatrix& m) {
    if (!all_finite(m.a)) throw std::invalid_argument("matrix has non-finite entries");
    const double dev = hermitian_deviation(m);
    if (dev > kHermitianTol) throw NonHermitianError(dev);
    return dev;
}

UnitaryGate::UnitaryGate(CMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows != matrix_.cols || !is_power_of_two(matrix_.rows) || matrix_.rows < 2)
        throw std::invalid_argument("gate matrix must be square with power-of-two dim >= 2");
    validate_unitary(matrix_);
    dim_qubits_ = log2_exact(matrix_.rows);
}

Observable::Observable(CMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows != matrix_.cols || !is_power_of_two(matrix_.rows) || matrix_.rows < 2)
        throw std::invalid_argument("observable must be square with power-of-two dim >= 2");
    validate_hermitian(matrix_);
    dim_qubits_ = log2_exact(matrix_.rows);
}

StateVector::StateVector(std::size_t num_qubits, std::vector<Complex> amps)
    : num_qubits_(num_qubits), amps_(std::move(amps)) {
    if (num_qubits_ < 1 || num_qubits_ > kMaxQubits)
        throw std::invalid_argument("register size " + std::to_string(num_qubits_) +
                                    " outside [1, " + std::to_string(kMaxQubits) + "]");
    if (amps_.size() != (std::size_t{1} << num_qubits_))
        throw std::invalid_argument("amplitude count does not match 2^num_qubits");
    if (!all_finite(amps_)) throw std::invalid_argument("state has non-finite amplitudes");
    const double n = norm();
    if (std::abs(n - 1.0) > kNormTol)
        throw std::invalid_argument("state norm " + std::to_string(n) + " is not 1");
}

StateVector StateVector::computational_zero(std::size_t num_qubits) {
    std::vector<Complex> amps(std::size_t{1} << num_qubits, Complex{0.0, 0.0});
    amps[0] = Complex{1.0, 0.0};
    return StateVector(num_qubits, std::move(amps));
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const Complex& c : amps_) acc += std::norm(c);
    return std::sqrt(acc);
}

StateVector apply_unitary(const StateVector& state, const UnitaryGate& u,
                          const std::vector<std::size_t>& targets) {
    if (u.dim_qubits() != targets.size())
        throw std::invalid_argument("gate acts on " + std::to_string(u.dim_qubits()) +
                                    " qubits but " + std::to_string(targets.size()) +
                                    " targets given");
    const auto pos = target_positions(state.num_qubits(), targets);
    auto out = blockwise_apply(state, u.matrix(), pos, [](std::size_t) { return true; });
    return StateVector(state.num_qubits(), std::move(out));
}

StateVector apply_controlled(const StateVector& state, std::size_t control,
                             int control_value, const UnitaryGate& u,
                             const std::vector<std::size_t>& targets) {
    if (control_value != 0 && control_value != 1)
        throw std::invalid_argument("control_value must be 0 or 1");
    if (control >= state.num_qubits())
        throw std::out_of_range("control qubit out of range");
    if (std::find(targets.begin(), targets.end(), control) != targets.end())
        throw std::invalid_argument("control qubit is also a target");
    if (u.dim_qubits() != targets.size())
        throw std::invalid_argument("gate acts on " + std::to_string(u.dim_qubits()) +
                                    " qubits but " + std::to_string(targets.size()) +
                                    " targets given");
    const auto pos = target_positions(state.num_qubits(), targets);
    const std::size_t control_bit = std::size_t{1} << (state.num_qubits() - 1 - control);
    const bool want = control_value == 1;
    auto out = blockwise_apply(state, u.matrix(), pos, [&](std::size_t base) {
        return ((base & control_bit) != 0) == want;
    });
    return StateVector(state.num_qubits(), std::move(out));
}

double expectation_on_data(const StateVector& state, const Observable& m,
                           std::size_t n_data) {
    if (m.dim_qubits() != n_data)
        throw std::invalid_argument("observable acts on " + std::to_string(m.dim_qubits()) +
                                    " qubits, expected " + std::to_string(n_data));
    if (n_data > state.num_qubits())
        throw std::invalid_argument("data register larger than the state");

    const std::size_t data_dim = std::size_t{1} << n_data;
    const std::size_t blocks = std::size_t{1} << (state.num_qubits() - n_data);
    const auto& amps = state.amps();
    const auto& mat = m.matrix();

    // Fixed ascending-index accumulation keeps runs bit-reproducible.
    Complex acc{0.0, 0.0};
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t off = b * data_dim;
        for (std::size_t r = 0; r < data_dim; ++r) {
            Complex row{0.0, 0.0};
            for (std::size_t c = 0; c < data_dim; ++c) row += mat(r, c) * amps[off + c];
            acc += std::conj(amps[off + r]) * row;
        }
    }
    if (std::abs(acc.imag()) > kNormTol)
        throw std::runtime_error("expectation imaginary residue " +
                                 std::to_string(acc.imag()) + " exceeds tolerance");
    return acc.real();
}

}  // namespace maqa::qsim
