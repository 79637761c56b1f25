#pragma once

#include <cstdint>
#include <vector>

#include "maqa/engine.hpp"

// Ensemble reading of the pipeline: uniform control weights, the
// X-conjugated form of the zero-controlled gate, and a bagging-style demo
// where each trajectory plays a pre-trained weak learner abstracted as a
// single-qubit rotation.

namespace maqa::ensemble {

struct EnsembleSpec {
    std::size_t d = 1;
    std::size_t n = 1;
    std::vector<GatePair> gate_pairs;             // optional outside the bagging demo
    std::vector<double> weak_learner_angles;      // 2^d entries for the bagging demo
    std::uint64_t seed = 0;
};

/// Uniform control amplitudes 1/sqrt(2^d).
std::vector<qsim::Complex> uniform_control_amps(std::size_t d);

/// Same step as trajectory_step but with the zero-controlled gate realized
/// as X(control) C1(on_zero) X(control), then C1(on_one). Counts two
/// controlled applications, like trajectory_step.
qsim::StateVector ensemble_step_xflip(const qsim::StateVector& state, std::size_t step,
                                      const qsim::UnitaryGate& on_one,
                                      const qsim::UnitaryGate& on_zero, std::size_t d,
                                      std::size_t n, GateTally* tally = nullptr);

/// Per-step rotation angles (on_one, on_zero) realizing an additively
/// decomposable learner-angle list; throws if the list cannot be decomposed.
struct StepAngles {
    std::size_t step = 0;
    double on_one = 0.0;
    double on_zero = 0.0;
};
std::vector<StepAngles> decompose_additive_angles(const std::vector<double>& angles,
                                                  std::size_t d);

struct LearnerRow {
    std::size_t h = 0;
    double angle = 0.0;
    double expectation = 0.0;
};

struct BaggingOutcome {
    double quantum_avg = 0.0;
    double classical_avg = 0.0;
    double abs_diff = 0.0;
    std::vector<LearnerRow> learners;
    std::vector<StepAngles> assignment;
};

/// Uniform-weight average of 2^d single-qubit weak learners, evaluated once
/// through the quantum pipeline and once by direct 2x2 matrix arithmetic.
/// The observable measures the single data qubit.
BaggingOutcome run_bagging_demo(const EnsembleSpec& spec, const std::vector<double>& x,
                                const qsim::Observable& observable);

}  // namespace maqa::ensemble
