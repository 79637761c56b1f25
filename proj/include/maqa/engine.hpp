#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "maqa/gates.hpp"
#include "maqa/qsim.hpp"

// Four-stage aggregation pipeline: prepare a control/data product state,
// entangle one data transformation pair per control qubit, apply a shared
// interference gate, and read the weighted average of all 2^d component
// functions off the data register. The classical trajectory enumeration in
// oracle_aggregate is the independent ground truth for that average.

namespace maqa {

/// Basis index for the joint register: control block h in the top d bits.
constexpr std::size_t basis_index(std::size_t h, std::size_t data_index, std::size_t n) {
    return (h << n) | data_index;
}

/// Data-register qubit indices for a (d, n) layout.
std::vector<std::size_t> data_targets(std::size_t d, std::size_t n);

/// Trajectory label h in [0, 2^d) with its control-bit decomposition;
/// bits()[0] is the most significant control bit.
struct TrajectoryIndex {
    std::size_t h = 0;
    std::size_t d = 0;

    TrajectoryIndex(std::size_t h_, std::size_t d_);
    static TrajectoryIndex from_bits(const std::vector<int>& bits);
    std::vector<int> bits() const;
};

/// Data gates for one entangling step: `on_one` fires when the step's
/// control qubit is |1>, `on_zero` when it is |0>.
struct GatePair {
    qsim::UnitaryGate on_one;
    qsim::UnitaryGate on_zero;
};

struct MaqaSpec {
    std::size_t d;
    std::size_t n;
    std::vector<qsim::Complex> beta_amps;  // control amplitudes, unit norm, length 2^d
    std::vector<qsim::Complex> x_raw;      // input, length <= 2^n, nonzero
    std::vector<GatePair> gate_pairs;      // exactly d entries, n-qubit gates
    qsim::UnitaryGate f_gate;              // n-qubit interference gate
    qsim::Observable observable;           // n-qubit measurement operator
    std::uint64_t seed = 0;

    MaqaSpec(std::size_t d_, std::size_t n_, std::vector<qsim::Complex> beta,
             std::vector<qsim::Complex> x, std::vector<GatePair> pairs,
             qsim::UnitaryGate f, qsim::Observable m, std::uint64_t seed_ = 0);

    std::size_t trajectory_count() const { return std::size_t{1} << d; }
    void validate() const;
};

/// Running count of instrumented gate applications.
struct GateTally {
    std::size_t controlled_g = 0;
    std::size_t f = 0;
};

struct ClassicalParams {
    double n_samples = 1.0;
    double p_features = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
};

struct ClassicalCostModel {
    std::size_t h = 1;  // aggregated function count, 2^d
    double n_samples = 1.0;
    double p_features = 1.0;
    double alpha = 1.0;
    double beta = 1.0;
    double cost = 1.0;  // h * n_samples^alpha * p_features^beta
};

struct ResourceReport {
    std::size_t controlled_g_applications = 0;
    std::size_t f_applications = 0;
    std::size_t trajectory_count = 1;
    ClassicalCostModel classical_cost_model;
};

struct TrajectoryComponent {
    std::size_t h = 0;
    double weight = 0.0;     // |beta_amps[h]|^2
    double component = 0.0;  // expectation of the observable on this branch
};

struct OracleAggregate {
    double value = 0.0;
    std::vector<TrajectoryComponent> per_trajectory;
};

struct AggregateResult {
    double quantum_value = 0.0;
    double oracle_value = 0.0;
    std::vector<TrajectoryComponent> per_trajectory;
    double abs_diff = 0.0;
};

struct RunOutput {
    AggregateResult aggregate;
    ResourceReport resources;
};

/// Zero-pad to length 2^n and L2-normalize. Rejects zero and oversized input.
std::vector<qsim::Complex> encode_amplitudes(const std::vector<qsim::Complex>& x_raw,
                                             std::size_t n);

/// Joint (d+n)-qubit product state: control amplitudes times the encoded input.
qsim::StateVector prepare_state(const MaqaSpec& spec);

/// One entangling step: gate for control=1 first, then for control=0, both on
/// the data register. Step i (1-based) is controlled by qubit d-i, so step 1
/// uses the least significant control qubit.
qsim::StateVector trajectory_step(const qsim::StateVector& state, std::size_t step,
                                  const qsim::UnitaryGate& on_one,
                                  const qsim::UnitaryGate& on_zero, std::size_t d,
                                  std::size_t n, GateTally* tally = nullptr);

/// All d entangling steps; exactly 2d controlled applications.
qsim::StateVector build_trajectories(const qsim::StateVector& state, const MaqaSpec& spec,
                                     GateTally* tally = nullptr);

/// Composed data-register unitary selected by trajectory h: step i contributes
/// its on_one gate when control bit d-i of h (counting from the most
/// significant bit) is 1, its on_zero gate otherwise; step 1 applies first.
qsim::UnitaryGate trajectory_unitary(const TrajectoryIndex& h, const MaqaSpec& spec);

/// Shared interference gate on the data register; one application covers
/// every branch.
qsim::StateVector apply_interference(const qsim::StateVector& state,
                                     const qsim::UnitaryGate& f,
                                     GateTally* tally = nullptr);

/// Weighted component average read off the data register.
double measure_aggregate(const qsim::StateVector& state, const qsim::Observable& m,
                         std::size_t d, std::size_t n);

/// Classical ground truth: enumerate all 2^d trajectories, evaluate each
/// component on the bare data space, and combine in ascending-h order.
/// Deliberately Theta(2^d).
OracleAggregate oracle_aggregate(const MaqaSpec& spec);

/// Full pipeline plus the oracle cross-check and instrumented gate counts.
RunOutput run_maqa(const MaqaSpec& spec);

/// Instrumented tallies plus the symbolic classical cost for the same job.
ResourceReport count_resources(const MaqaSpec& spec, const ClassicalParams& params);

// ---------------------------------------------------------------------------
// d=3 golden check: the entangled state built by the pipeline is compared
// block-by-block against the hand-expanded trajectory table, with control
// amplitudes given by a product of three single-qubit preparations.
// ---------------------------------------------------------------------------

struct AppendixBlockCheck {
    std::size_t h = 0;
    std::string composition;  // e.g. "G(3,2) G(2,2) G(1,1)"
    double max_diff = 0.0;
};

struct AppendixReport {
    std::uint64_t seed = 0;
    double tolerance = 1e-12;
    std::vector<AppendixBlockCheck> blocks;
    double max_diff = 0.0;
    bool passed = false;
};

/// Runs the d=3 block check for one product-form preparation and three gate
/// pairs on a single data qubit.
AppendixReport run_appendix_check(const std::array<qsim::CMatrix, 3>& control_prep,
                                  const std::array<GatePair, 3>& pairs,
                                  const std::vector<qsim::Complex>& x_raw,
                                  std::uint64_t seed_label);

/// Seeded d=3 golden check with random preparations, gates and input.
AppendixReport verify_appendix(std::uint64_t seed);

/// Reproducible fully-random experiment description; the workhorse behind
/// randomized tests.
MaqaSpec random_maqa_spec(std::size_t d, std::size_t n, std::uint64_t seed);

}  // namespace maqa
