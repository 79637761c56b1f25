#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "maqa/engine.hpp"

// Single-layer-perceptron reading of the aggregation pipeline: the 2^d
// trajectories act as hidden neurons, trainable Y-rotations parametrize both
// the per-step data gates and the control preparation, and a projector
// measurement turns the aggregate into a [0, 1] prediction. Training is
// plain gradient descent on finite-difference gradients.

namespace maqa::qslp {

struct QslpSpec {
    std::size_t d = 1;
    std::size_t n = 1;
    std::vector<double> theta;                    // 2 * d * n angles; empty = seed-initialized
    std::vector<double> beta_params;              // d control angles; empty = seed-initialized
    std::optional<qsim::UnitaryGate> f_gate;      // defaults to identity(n)
    std::uint64_t seed = 0;

    std::size_t params_per_gate() const { return n; }
    std::size_t theta_count() const { return 2 * d * n; }
    std::size_t param_count() const { return theta_count() + d; }
};

struct DataPoint {
    std::vector<double> x;
    double label = 0.0;  // 0.0 or 1.0
};

struct ToyDataset {
    std::vector<DataPoint> points;
};

struct TrainReport {
    std::vector<double> loss_trace;  // epochs + 1 entries, initial loss first
    std::vector<double> final_theta;
    std::vector<double> final_beta_params;
    std::size_t epochs = 0;
    double learning_rate = 0.0;
    double fd_step = 0.0;
    std::uint64_t seed = 0;
};

/// One trainable data gate: per-qubit Ry rotations followed by a
/// nearest-neighbor controlled-flip ladder when n >= 2.
qsim::UnitaryGate template_gate(const std::vector<double>& angles, std::size_t n);

/// Projector onto |1> of the first (most significant) data qubit.
qsim::Observable first_qubit_projector(std::size_t n);

/// Expand the trainable parameters into a full experiment description.
MaqaSpec to_maqa_spec(const QslpSpec& spec, const std::vector<double>& x);

/// Runs the quantum pipeline; result clamped to [0, 1].
double qslp_predict(const std::vector<double>& x, const QslpSpec& spec);

/// Mean squared error over the dataset, points combined in index order.
double qslp_loss(const ToyDataset& data, const QslpSpec& spec);

/// Central finite differences of an arbitrary scalar objective.
std::vector<double> central_difference(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& at, double step);

/// Gradient of qslp_loss over the concatenated (theta, beta_params) vector.
std::vector<double> qslp_gradient_fd(const ToyDataset& data, const QslpSpec& spec,
                                     double step);

/// Fixed-rate gradient descent. When the spec carries no parameters they are
/// drawn uniformly from (-1, 1) using the given seed. Aborts with a
/// diagnostic if the parameters or loss stop being finite.
TrainReport qslp_train(const ToyDataset& data, QslpSpec spec, std::size_t epochs,
                       double learning_rate, double fd_step, std::uint64_t seed);

void validate_dataset(const ToyDataset& data, std::size_t n);

}  // namespace maqa::qslp
