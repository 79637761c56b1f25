#include "maqa/engine.hpp"

#include <cmath>
#include <numeric>

namespace maqa {

using qsim::CMatrix;
using qsim::Complex;
using qsim::Observable;
using qsim::StateVector;
using qsim::UnitaryGate;

std::vector<std::size_t> data_targets(std::size_t d, std::size_t n) {
    std::vector<std::size_t> t(n);
    std::iota(t.begin(), t.end(), d);
    return t;
}

TrajectoryIndex::TrajectoryIndex(std::size_t h_, std::size_t d_) : h(h_), d(d_) {
    if (h >= (std::size_t{1} << d))
        throw std::out_of_range("trajectory " + std::to_string(h) + " out of range for d=" +
                                std::to_string(d));
}

TrajectoryIndex TrajectoryIndex::from_bits(const std::vector<int>& bits) {
    std::size_t h = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) throw std::invalid_argument("trajectory bits must be 0 or 1");
        h = (h << 1) | static_cast<std::size_t>(b);
    }
    return TrajectoryIndex(h, bits.size());
}

std::vector<int> TrajectoryIndex::bits() const {
    std::vector<int> out(d);
    for (std::size_t j = 0; j < d; ++j) out[j] = static_cast<int>((h >> (d - 1 - j)) & 1);
    return out;
}

MaqaSpec::MaqaSpec(std::size_t d_, std::size_t n_, std::vector<Complex> beta,
                   std::vector<Complex> x, std::vector<GatePair> pairs, UnitaryGate f,
                   Observable m, std::uint64_t seed_)
    : d(d_),
      n(n_),
      beta_amps(std::move(beta)),
      x_raw(std::move(x)),
      gate_pairs(std::move(pairs)),
      f_gate(std::move(f)),
      observable(std::move(m)),
      seed(seed_) {
    validate();
}

void MaqaSpec::validate() const {
    if (n < 1) throw std::invalid_argument("data register needs at least one qubit");
    if (d + n > qsim::kMaxQubits)
        throw std::invalid_argument("d + n = " + std::to_string(d + n) + " exceeds the " +
                                    std::to_string(qsim::kMaxQubits) + "-qubit cap");
    if (beta_amps.size() != trajectory_count())
        throw std::invalid_argument("beta_amps must have 2^d entries");
    if (!qsim::all_finite(beta_amps))
        throw std::invalid_argument("beta_amps has non-finite entries");
    double norm2 = 0.0;
    for (const Complex& c : beta_amps) norm2 += std::norm(c);
    if (std::abs(std::sqrt(norm2) - 1.0) > qsim::kNormTol)
        throw std::invalid_argument("beta_amps is not unit norm");
    if (gate_pairs.size() != d) throw std::invalid_argument("need exactly d gate pairs");
    for (const GatePair& p : gate_pairs)
        if (p.on_one.dim_qubits() != n || p.on_zero.dim_qubits() != n)
            throw std::invalid_argument("gate pair does not act on the data register");
    if (f_gate.dim_qubits() != n)
        throw std::invalid_argument("interference gate does not act on the data register");
    if (observable.dim_qubits() != n)
        throw std::invalid_argument("observable does not act on the data register");
    if (x_raw.empty() || x_raw.size() > (std::size_t{1} << n))
        throw std::invalid_argument("input length must be in [1, 2^n]");
    if (!qsim::all_finite(x_raw)) throw std::invalid_argument("input has non-finite entries");
    double xnorm = 0.0;
    for (const Complex& c : x_raw) xnorm += std::norm(c);
    if (xnorm == 0.0) throw std::invalid_argument("input vector is zero");
}

std::vector<Complex> encode_amplitudes(const std::vector<Complex>& x_raw, std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    if (x_raw.empty() || x_raw.size() > dim)
        throw std::invalid_argument("input length must be in [1, 2^n]");
    double norm = 0.0;
    for (const Complex& c : x_raw) norm += std::norm(c);
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::invalid_argument("input vector is zero");
    std::vector<Complex> out(dim, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < x_raw.size(); ++i) out[i] = x_raw[i] / norm;
    return out;
}

StateVector prepare_state(const MaqaSpec& spec) {
    spec.validate();
    const auto xhat = encode_amplitudes(spec.x_raw, spec.n);
    const std::size_t data_dim = xhat.size();
    std::vector<Complex> amps(spec.trajectory_count() * data_dim);
    for (std::size_t h = 0; h < spec.trajectory_count(); ++h)
        for (std::size_t k = 0; k < data_dim; ++k)
            amps[basis_index(h, k, spec.n)] = spec.beta_amps[h] * xhat[k];
    return StateVector(spec.d + spec.n, std::move(amps));
}

StateVector trajectory_step(const StateVector& state, std::size_t step,
                            const UnitaryGate& on_one, const UnitaryGate& on_zero,
                            std::size_t d, std::size_t n, GateTally* tally) {
    if (state.num_qubits() != d + n)
        throw std::invalid_argument("state does not match the (d, n) layout");
    if (step < 1 || step > d) throw std::out_of_range("step index out of range");
    const std::size_t control = d - step;
    const auto targets = data_targets(d, n);
    StateVector s = qsim::apply_controlled(state, control, 1, on_one, targets);
    if (tally) ++tally->controlled_g;
    s = qsim::apply_controlled(s, control, 0, on_zero, targets);
    if (tally) ++tally->controlled_g;
    return s;
}

StateVector build_trajectories(const StateVector& state, const MaqaSpec& spec,
                               GateTally* tally) {
    if (state.num_qubits() != spec.d + spec.n)
        throw std::invalid_argument("state does not match the spec layout");
    StateVector s = state;
    for (std::size_t i = 1; i <= spec.d; ++i)
        s = trajectory_step(s, i, spec.gate_pairs[i - 1].on_one,
                            spec.gate_pairs[i - 1].on_zero, spec.d, spec.n, tally);
    return s;
}

UnitaryGate trajectory_unitary(const TrajectoryIndex& h, const MaqaSpec& spec) {
    if (h.d != spec.d) throw std::invalid_argument("trajectory width does not match spec");
    CMatrix m = CMatrix::identity(std::size_t{1} << spec.n);
    for (std::size_t i = 1; i <= spec.d; ++i) {
        const bool excited = ((h.h >> (i - 1)) & 1) != 0;  // step i reads bit i-1 (LSB up)
        const GatePair& pair = spec.gate_pairs[i - 1];
        m = qsim::matmul(excited ? pair.on_one.matrix() : pair.on_zero.matrix(), m);
    }
    return UnitaryGate(std::move(m));
}

StateVector apply_interference(const StateVector& state, const UnitaryGate& f,
                               GateTally* tally) {
    const std::size_t n = f.dim_qubits();
    if (n > state.num_qubits())
        throw std::invalid_argument("interference gate larger than the register");
    const std::size_t d = state.num_qubits() - n;
    StateVector s = qsim::apply_unitary(state, f, data_targets(d, n));
    if (tally) ++tally->f;
    return s;
}

double measure_aggregate(const StateVector& state, const Observable& m, std::size_t d,
                         std::size_t n) {
    if (state.num_qubits() != d + n)
        throw std::invalid_argument("state does not match the (d, n) layout");
    return qsim::expectation_on_data(state, m, n);
}

OracleAggregate oracle_aggregate(const MaqaSpec& spec) {
    spec.validate();
    const auto xhat = encode_amplitudes(spec.x_raw, spec.n);
    const CMatrix& fmat = spec.f_gate.matrix();
    const CMatrix& mmat = spec.observable.matrix();

    OracleAggregate out;
    out.per_trajectory.reserve(spec.trajectory_count());
    for (std::size_t h = 0; h < spec.trajectory_count(); ++h) {
        const UnitaryGate u = trajectory_unitary(TrajectoryIndex(h, spec.d), spec);
        std::vector<Complex> v = qsim::matvec(u.matrix(), xhat);
        v = qsim::matvec(fmat, v);
        Complex quad{0.0, 0.0};
        for (std::size_t r = 0; r < v.size(); ++r) {
            Complex row{0.0, 0.0};
            for (std::size_t c = 0; c < v.size(); ++c) row += mmat(r, c) * v[c];
            quad += std::conj(v[r]) * row;
        }
        if (std::abs(quad.imag()) > qsim::kNormTol)
            throw std::runtime_error("component imaginary residue exceeds tolerance");
        const double weight = std::norm(spec.beta_amps[h]);
        out.per_trajectory.push_back({h, weight, quad.real()});
        out.value += weight * quad.real();
    }
    return out;
}

namespace {

ClassicalCostModel make_cost_model(std::size_t d, const ClassicalParams& p) {
    if (p.alpha < 1.0 || p.beta < 1.0)
        throw std::invalid_argument("classical cost exponents must be >= 1");
    if (p.n_samples < 1.0 || p.p_features < 1.0)
        throw std::invalid_argument("classical cost sizes must be >= 1");
    ClassicalCostModel m;
    m.h = std::size_t{1} << d;
    m.n_samples = p.n_samples;
    m.p_features = p.p_features;
    m.alpha = p.alpha;
    m.beta = p.beta;
    m.cost = static_cast<double>(m.h) * std::pow(p.n_samples, p.alpha) *
             std::pow(p.p_features, p.beta);
    return m;
}

}  // namespace

RunOutput run_maqa(const MaqaSpec& spec) {
    GateTally tally;
    StateVector s = prepare_state(spec);
    s = build_trajectories(s, spec, &tally);
    s = apply_interference(s, spec.f_gate, &tally);
    const double quantum = measure_aggregate(s, spec.observable, spec.d, spec.n);

    OracleAggregate oracle = oracle_aggregate(spec);

    RunOutput out;
    out.aggregate.quantum_value = quantum;
    out.aggregate.oracle_value = oracle.value;
    out.aggregate.per_trajectory = std::move(oracle.per_trajectory);
    out.aggregate.abs_diff = std::abs(quantum - oracle.value);
    out.resources.controlled_g_applications = tally.controlled_g;
    out.resources.f_applications = tally.f;
    out.resources.trajectory_count = spec.trajectory_count();
    out.resources.classical_cost_model = make_cost_model(spec.d, ClassicalParams{});
    return out;
}

ResourceReport count_resources(const MaqaSpec& spec, const ClassicalParams& params) {
    ClassicalCostModel model = make_cost_model(spec.d, params);
    GateTally tally;
    StateVector s = prepare_state(spec);
    s = build_trajectories(s, spec, &tally);
    s = apply_interference(s, spec.f_gate, &tally);

    ResourceReport report;
    report.controlled_g_applications = tally.controlled_g;
    report.f_applications = tally.f;
    report.trajectory_count = spec.trajectory_count();
    report.classical_cost_model = model;
    return report;
}

AppendixReport run_appendix_check(const std::array<CMatrix, 3>& control_prep,
                                  const std::array<GatePair, 3>& pairs,
                                  const std::vector<Complex>& x_raw,
                                  std::uint64_t seed_label) {
    // Control amplitudes: product of the |0>-column entries of each
    // single-qubit preparation, one factor per control bit.
    std::array<Complex, 3> a;
    std::array<Complex, 3> b;
    for (std::size_t i = 0; i < 3; ++i) {
        if (control_prep[i].rows != 2 || control_prep[i].cols != 2)
            throw std::invalid_argument("control preparation must be a single-qubit gate");
        qsim::validate_unitary(control_prep[i]);
        a[i] = control_prep[i](0, 0);
        b[i] = control_prep[i](1, 0);
    }
    std::vector<Complex> beta(8);
    for (std::size_t h = 0; h < 8; ++h) {
        Complex coeff{1.0, 0.0};
        for (std::size_t i = 0; i < 3; ++i)
            coeff *= ((h >> (2 - i)) & 1) ? b[i] : a[i];
        beta[h] = coeff;
    }

    MaqaSpec spec(3, 1, beta, x_raw, {pairs[0], pairs[1], pairs[2]},
                  UnitaryGate(gates::identity(1)), Observable(gates::pauli_z()),
                  seed_label);
    const StateVector built = build_trajectories(prepare_state(spec), spec);
    const auto xhat = encode_amplitudes(x_raw, 1);

    // Hand-expanded d=3 trajectory table: selector j per step, latest step
    // leftmost. 1 = on_one, 2 = on_zero.
    static constexpr int kSelect[8][3] = {
        {2, 2, 2}, {2, 2, 1}, {2, 1, 2}, {2, 1, 1},
        {1, 2, 2}, {1, 2, 1}, {1, 1, 2}, {1, 1, 1},
    };

    AppendixReport report;
    report.seed = seed_label;
    report.tolerance = 1e-12;
    for (std::size_t h = 0; h < 8; ++h) {
        const int s3 = kSelect[h][0];
        const int s2 = kSelect[h][1];
        const int s1 = kSelect[h][2];
        auto pick = [&](std::size_t step, int sel) -> const CMatrix& {
            return sel == 1 ? pairs[step - 1].on_one.matrix()
                            : pairs[step - 1].on_zero.matrix();
        };
        CMatrix composed = qsim::matmul(pick(3, s3), qsim::matmul(pick(2, s2), pick(1, s1)));
        std::vector<Complex> expected = qsim::matvec(composed, xhat);
        double diff = 0.0;
        for (std::size_t k = 0; k < expected.size(); ++k) {
            const Complex got = built.amps()[basis_index(h, k, 1)];
            diff = std::max(diff, std::abs(got - beta[h] * expected[k]));
        }
        AppendixBlockCheck check;
        check.h = h;
        check.composition = "G(3," + std::to_string(s3) + ") G(2," + std::to_string(s2) +
                            ") G(1," + std::to_string(s1) + ")";
        check.max_diff = diff;
        report.blocks.push_back(std::move(check));
        report.max_diff = std::max(report.max_diff, diff);
    }
    report.passed = report.max_diff <= report.tolerance;
    return report;
}

AppendixReport verify_appendix(std::uint64_t seed) {
    gates::Rng rng(seed);
    std::array<CMatrix, 3> prep = {gates::random_unitary(1, rng),
                                   gates::random_unitary(1, rng),
                                   gates::random_unitary(1, rng)};
    auto pair = [&] {
        return GatePair{UnitaryGate(gates::random_unitary(1, rng)),
                        UnitaryGate(gates::random_unitary(1, rng))};
    };
    std::array<GatePair, 3> pairs = {pair(), pair(), pair()};
    std::vector<Complex> x = {rng.complex_gaussian(), rng.complex_gaussian()};
    return run_appendix_check(prep, pairs, x, seed);
}

MaqaSpec random_maqa_spec(std::size_t d, std::size_t n, std::uint64_t seed) {
    gates::Rng rng(seed);

    std::vector<Complex> beta(std::size_t{1} << d);
    double norm = 0.0;
    for (auto& c : beta) {
        c = rng.complex_gaussian();
        norm += std::norm(c);
    }
    norm = std::sqrt(norm);
    for (auto& c : beta) c /= norm;

    const std::size_t xlen = 1 + rng.uniform_index(std::size_t{1} << n);
    std::vector<Complex> x(xlen);
    for (auto& c : x) c = rng.complex_gaussian();

    std::vector<GatePair> pairs;
    pairs.reserve(d);
    for (std::size_t i = 0; i < d; ++i)
        pairs.push_back({UnitaryGate(gates::random_unitary(n, rng)),
                         UnitaryGate(gates::random_unitary(n, rng))});

    UnitaryGate f(gates::random_unitary(n, rng));
    Observable m(gates::random_hermitian(n, rng));
    return MaqaSpec(d, n, std::move(beta), std::move(x), std::move(pairs), std::move(f),
                    std::move(m), seed);
}

}  // namespace maqa
