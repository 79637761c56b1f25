#include "maqa/ensemble.hpp"

#include <cmath>

namespace maqa::ensemble {

using qsim::CMatrix;
using qsim::Complex;
using qsim::Observable;
using qsim::StateVector;
using qsim::UnitaryGate;

std::vector<Complex> uniform_control_amps(std::size_t d) {
    const std::size_t count = std::size_t{1} << d;
    const double amp = 1.0 / std::sqrt(static_cast<double>(count));
    return std::vector<Complex>(count, Complex{amp, 0.0});
}

StateVector ensemble_step_xflip(const StateVector& state, std::size_t step,
                                const UnitaryGate& on_one, const UnitaryGate& on_zero,
                                std::size_t d, std::size_t n, GateTally* tally) {
    if (state.num_qubits() != d + n)
        throw std::invalid_argument("state does not match the (d, n) layout");
    if (step < 1 || step > d) throw std::out_of_range("step index out of range");
    const std::size_t control = d - step;
    const auto targets = data_targets(d, n);
    const UnitaryGate x(gates::pauli_x());

    StateVector s = qsim::apply_unitary(state, x, {control});
    s = qsim::apply_controlled(s, control, 1, on_zero, targets);
    if (tally) ++tally->controlled_g;
    s = qsim::apply_unitary(s, x, {control});
    s = qsim::apply_controlled(s, control, 1, on_one, targets);
    if (tally) ++tally->controlled_g;
    return s;
}

std::vector<StepAngles> decompose_additive_angles(const std::vector<double>& angles,
                                                  std::size_t d) {
    if (d < 1) throw std::invalid_argument("bagging demo needs at least one control qubit");
    if (angles.size() != (std::size_t{1} << d))
        throw std::invalid_argument("need exactly 2^d learner angles, got " +
                                    std::to_string(angles.size()));

    // Learner h's angle is the sum over steps of the on_one/on_zero angle
    // selected by bit (step-1) of h; recover the per-step split from the
    // all-zero learner and the single-bit learners, then check the rest.
    const double base = angles[0];
    std::vector<StepAngles> assignment(d);
    for (std::size_t i = 1; i <= d; ++i) {
        const double delta = angles[std::size_t{1} << (i - 1)] - base;
        assignment[i - 1].step = i;
        assignment[i - 1].on_zero = base / static_cast<double>(d);
        assignment[i - 1].on_one = base / static_cast<double>(d) + delta;
    }
    for (std::size_t h = 0; h < angles.size(); ++h) {
        double total = 0.0;
        for (std::size_t i = 1; i <= d; ++i)
            total += ((h >> (i - 1)) & 1) ? assignment[i - 1].on_one
                                          : assignment[i - 1].on_zero;
        if (std::abs(total - angles[h]) > 1e-9)
            throw std::invalid_argument(
                "learner angles are not additively decomposable across steps (learner " +
                std::to_string(h) + ")");
    }
    return assignment;
}

BaggingOutcome run_bagging_demo(const EnsembleSpec& spec, const std::vector<double>& x,
                                const Observable& observable) {
    if (spec.n != 1)
        throw std::invalid_argument("bagging demo runs on a single data qubit");
    if (observable.dim_qubits() != 1)
        throw std::invalid_argument("bagging demo needs a single-qubit observable");
    const auto assignment = decompose_additive_angles(spec.weak_learner_angles, spec.d);

    std::vector<Complex> x_raw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) x_raw[i] = Complex{x[i], 0.0};

    std::vector<GatePair> pairs;
    pairs.reserve(spec.d);
    for (const StepAngles& s : assignment)
        pairs.push_back({UnitaryGate(gates::ry(s.on_one)), UnitaryGate(gates::ry(s.on_zero))});

    MaqaSpec maqa(spec.d, 1, uniform_control_amps(spec.d), x_raw, std::move(pairs),
                  UnitaryGate(gates::identity(1)), observable, spec.seed);
    StateVector s = prepare_state(maqa);
    s = build_trajectories(s, maqa);
    s = apply_interference(s, maqa.f_gate);
    const double quantum = measure_aggregate(s, maqa.observable, maqa.d, maqa.n);

    // Classical side: plain 2x2 arithmetic per learner, no register at all.
    const auto xhat = encode_amplitudes(x_raw, 1);
    const CMatrix& m = observable.matrix();
    BaggingOutcome out;
    out.quantum_avg = quantum;
    double acc = 0.0;
    for (std::size_t h = 0; h < spec.weak_learner_angles.size(); ++h) {
        const double angle = spec.weak_learner_angles[h];
        const std::vector<Complex> v = qsim::matvec(gates::ry(angle), xhat);
        Complex quad{0.0, 0.0};
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                quad += std::conj(v[r]) * m(r, c) * v[c];
        out.learners.push_back({h, angle, quad.real()});
        acc += quad.real();
    }
    out.classical_avg = acc / static_cast<double>(spec.weak_learner_angles.size());
    out.abs_diff = std::abs(out.quantum_avg - out.classical_avg);
    out.assignment = assignment;
    return out;
}

}  // namespace maqa::ensemble
