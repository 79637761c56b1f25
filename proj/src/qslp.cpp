#include "maqa/qslp.hpp"

#include <algorithm>
#include <cmath>

namespace maqa::qslp {

using qsim::CMatrix;
using qsim::Complex;
using qsim::Observable;
using qsim::UnitaryGate;

UnitaryGate template_gate(const std::vector<double>& angles, std::size_t n) {
    if (angles.size() != n)
        throw std::invalid_argument("template gate needs one angle per data qubit");
    CMatrix rot = gates::ry(angles[0]);
    for (std::size_t q = 1; q < n; ++q) rot = qsim::kron(rot, gates::ry(angles[q]));
    if (n >= 2) rot = qsim::matmul(gates::cx_ladder(n), rot);
    return UnitaryGate(std::move(rot));
}

Observable first_qubit_projector(std::size_t n) {
    CMatrix m = gates::projector_one();
    if (n >= 2) m = qsim::kron(m, gates::identity(n - 1));
    return Observable(std::move(m));
}

namespace {

void validate_params(const QslpSpec& spec) {
    if (spec.theta.size() != spec.theta_count())
        throw std::invalid_argument("theta must hold 2*d*n angles");
    if (spec.beta_params.size() != spec.d)
        throw std::invalid_argument("beta_params must hold d angles");
    for (double v : spec.theta)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite theta angle");
    for (double v : spec.beta_params)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite control angle");
}

std::vector<double> theta_slice(const QslpSpec& spec, std::size_t step, int which) {
    const std::size_t n = spec.n;
    const std::size_t base = ((step - 1) * 2 + static_cast<std::size_t>(which)) * n;
    return {spec.theta.begin() + static_cast<std::ptrdiff_t>(base),
            spec.theta.begin() + static_cast<std::ptrdiff_t>(base + n)};
}

}  // namespace

MaqaSpec to_maqa_spec(const QslpSpec& spec, const std::vector<double>& x) {
    validate_params(spec);

    // Control register as a product of Ry(beta_i)|0> factors, most
    // significant qubit first.
    std::vector<Complex> beta = {Complex{1.0, 0.0}};
    for (std::size_t i = 0; i < spec.d; ++i) {
        const double c = std::cos(spec.beta_params[i] / 2.0);
        const double s = std::sin(spec.beta_params[i] / 2.0);
        std::vector<Complex> next(beta.size() * 2);
        for (std::size_t k = 0; k < beta.size(); ++k) {
            next[2 * k] = beta[k] * c;
            next[2 * k + 1] = beta[k] * s;
        }
        beta = std::move(next);
    }

    std::vector<GatePair> pairs;
    pairs.reserve(spec.d);
    for (std::size_t i = 1; i <= spec.d; ++i)
        pairs.push_back({template_gate(theta_slice(spec, i, 0), spec.n),
                         template_gate(theta_slice(spec, i, 1), spec.n)});

    std::vector<Complex> x_raw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) x_raw[i] = Complex{x[i], 0.0};

    UnitaryGate f = spec.f_gate ? *spec.f_gate : UnitaryGate(gates::identity(spec.n));
    return MaqaSpec(spec.d, spec.n, std::move(beta), std::move(x_raw), std::move(pairs),
                    std::move(f), first_qubit_projector(spec.n), spec.seed);
}

double qslp_predict(const std::vector<double>& x, const QslpSpec& spec) {
    const MaqaSpec maqa = to_maqa_spec(spec, x);
    qsim::StateVector s = prepare_state(maqa);
    s = build_trajectories(s, maqa);
    s = apply_interference(s, maqa.f_gate);
    const double value = measure_aggregate(s, maqa.observable, maqa.d, maqa.n);
    return std::clamp(value, 0.0, 1.0);
}

void validate_dataset(const ToyDataset& data, std::size_t n) {
    if (data.points.empty()) throw std::invalid_argument("empty dataset");
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        const DataPoint& p = data.points[i];
        if (p.label != 0.0 && p.label != 1.0)
            throw std::invalid_argument("label at point " + std::to_string(i) +
                                        " is not binary");
        if (p.x.empty() || p.x.size() > (std::size_t{1} << n))
            throw std::invalid_argument("point " + std::to_string(i) +
                                        " has bad dimension");
        double norm = 0.0;
        for (double v : p.x) {
            if (!std::isfinite(v))
                throw std::invalid_argument("point " + std::to_string(i) +
                                            " has non-finite entries");
            norm += v * v;
        }
        if (norm == 0.0)
            throw std::invalid_argument("point " + std::to_string(i) + " is the zero vector");
    }
}

double qslp_loss(const ToyDataset& data, const QslpSpec& spec) {
    validate_dataset(data, spec.n);
    double acc = 0.0;
    for (const DataPoint& p : data.points) {
        const double err = qslp_predict(p.x, spec) - p.label;
        acc += err * err;
    }
    return acc / static_cast<double>(data.points.size());
}

std::vector<double> central_difference(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& at, double step) {
    if (step <= 0.0) throw std::invalid_argument("finite-difference step must be positive");
    std::vector<double> grad(at.size());
    std::vector<double> probe = at;
    for (std::size_t k = 0; k < at.size(); ++k) {
        probe[k] = at[k] + step;
        const double up = objective(probe);
        probe[k] = at[k] - step;
        const double down = objective(probe);
        probe[k] = at[k];
        grad[k] = (up - down) / (2.0 * step);
    }
    return grad;
}

namespace {

std::vector<double> pack_params(const QslpSpec& spec) {
    std::vector<double> params = spec.theta;
    params.insert(params.end(), spec.beta_params.begin(), spec.beta_params.end());
    return params;
}

QslpSpec with_params(const QslpSpec& spec, const std::vector<double>& params) {
    QslpSpec out = spec;
    out.theta.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(spec.theta_count()));
    out.beta_params.assign(params.begin() + static_cast<std::ptrdiff_t>(spec.theta_count()),
                           params.end());
    return out;
}

}  // namespace

std::vector<double> qslp_gradient_fd(const ToyDataset& data, const QslpSpec& spec,
                                     double step) {
    validate_params(spec);
    const auto objective = [&](const std::vector<double>& params) {
        return qslp_loss(data, with_params(spec, params));
    };
    return central_difference(objective, pack_params(spec), step);
}

TrainReport qslp_train(const ToyDataset& data, QslpSpec spec, std::size_t epochs,
                       double learning_rate, double fd_step, std::uint64_t seed) {
    if (epochs < 1) throw std::invalid_argument("need at least one epoch");
    if (learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");
    if (fd_step <= 0.0) throw std::invalid_argument("finite-difference step must be positive");

    gates::Rng rng(seed);
    if (spec.theta.empty()) {
        spec.theta.resize(spec.theta_count());
        for (double& v : spec.theta) v = rng.uniform(-1.0, 1.0);
    }
    if (spec.beta_params.empty()) {
        spec.beta_params.resize(spec.d);
        for (double& v : spec.beta_params) v = rng.uniform(-1.0, 1.0);
    }
    validate_params(spec);
    validate_dataset(data, spec.n);

    TrainReport report;
    report.epochs = epochs;
    report.learning_rate = learning_rate;
    report.fd_step = fd_step;
    report.seed = seed;
    report.loss_trace.reserve(epochs + 1);
    report.loss_trace.push_back(qslp_loss(data, spec));

    std::vector<double> params = pack_params(spec);
    for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
        const std::vector<double> grad = qslp_gradient_fd(data, with_params(spec, params), fd_step);
        for (std::size_t k = 0; k < params.size(); ++k)
            params[k] -= learning_rate * grad[k];
        for (double v : params)
            if (!std::isfinite(v))
                throw std::runtime_error("training diverged at epoch " +
                                         std::to_string(epoch) + ": non-finite parameter");
        const double loss = qslp_loss(data, with_params(spec, params));
        if (!std::isfinite(loss))
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch) +
                                     ": loss is not finite");
        report.loss_trace.push_back(loss);
    }

    const QslpSpec trained = with_params(spec, params);
    report.final_theta = trained.theta;
    report.final_beta_params = trained.beta_params;
    return report;
}

}  // namespace maqa::qslp
