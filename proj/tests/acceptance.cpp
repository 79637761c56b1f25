// Acceptance suite: one verdict line per criterion, nonzero exit when any
// requested criterion fails. Run with no arguments for the full battery or
// with --criterion <1..8> for a single check.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "maqa/engine.hpp"
#include "maqa/ensemble.hpp"
#include "maqa/qslp.hpp"

using namespace maqa;
using qsim::Complex;
using qsim::Observable;
using qsim::StateVector;
using qsim::UnitaryGate;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

// 1. Weighted aggregate read off the data register equals the exhaustive
//    classical trajectory average for 200 seeded specs, d 0..8, n 1..4.
Outcome aggregation_theorem() {
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t d = static_cast<std::size_t>(k) % 9;
        const std::size_t n = 1 + (static_cast<std::size_t>(k) % 4);
        const MaqaSpec spec = random_maqa_spec(d, n, 0xA55E0000ULL + k);
        const RunOutput out = run_maqa(spec);
        worst = std::max(worst, out.aggregate.abs_diff);
    }
    return {worst <= 1e-9, "max |quantum - oracle| = " + fmt(worst) +
                               " over 200 seeded specs (tolerance 1e-9)"};
}

// 2. d=3 golden block check for 100 seeds at 1e-12, with the pinned
//    gate selections for the 001 and 111 blocks.
Outcome golden_blocks() {
    double worst = 0.0;
    int failures = 0;
    bool selections_ok = true;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const AppendixReport report = verify_appendix(seed);
        worst = std::max(worst, report.max_diff);
        if (!report.passed) ++failures;
        selections_ok = selections_ok && report.blocks.size() == 8 &&
                        report.blocks[1].composition == "G(3,2) G(2,2) G(1,1)" &&
                        report.blocks[7].composition == "G(3,1) G(2,1) G(1,1)";
    }
    return {failures == 0 && worst <= 1e-12 && selections_ok,
            "100 seeds, max block diff = " + fmt(worst) + " (tolerance 1e-12)" +
                (selections_ok ? ", 001/111 selections as pinned" : ", WRONG selections")};
}

// 3. Exactly 2d controlled applications and one interference gate while the
//    oracle enumerates 2^d trajectories, for every d in 0..8.
Outcome depth_vs_breadth() {
    for (std::size_t d = 0; d <= 8; ++d) {
        const MaqaSpec spec = random_maqa_spec(d, 2, 0xBEEF00ULL + d);
        const RunOutput out = run_maqa(spec);
        const bool ok = out.resources.controlled_g_applications == 2 * d &&
                        out.resources.f_applications == 1 &&
                        out.resources.trajectory_count == (std::size_t{1} << d) &&
                        out.aggregate.per_trajectory.size() == (std::size_t{1} << d);
        if (!ok)
            return {false, "counts wrong at d = " + std::to_string(d) + ": " +
                               std::to_string(out.resources.controlled_g_applications) +
                               " controlled, " +
                               std::to_string(out.resources.f_applications) + " interference"};
    }
    return {true, "2d controlled + 1 interference gate vs 2^d trajectories for d in 0..8"};
}

// 4. The X-conjugated step equals the direct two-control step on 1000 cases.
Outcome xflip_equivalence() {
    gates::Rng rng(0xF11F);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t d = 1 + rng.uniform_index(4);
        const std::size_t n = 1 + rng.uniform_index(3);
        const std::size_t step = 1 + rng.uniform_index(d);
        const UnitaryGate g1(gates::random_unitary(n, rng));
        const UnitaryGate g2(gates::random_unitary(n, rng));
        const StateVector psi(d + n, gates::random_state_amps(d + n, rng));
        const StateVector direct = trajectory_step(psi, step, g1, g2, d, n);
        const StateVector flipped = ensemble::ensemble_step_xflip(psi, step, g1, g2, d, n);
        for (std::size_t i = 0; i < direct.dim(); ++i)
            worst = std::max(worst, std::abs(direct.amps()[i] - flipped.amps()[i]));
    }
    return {worst <= 1e-12,
            "max amplitude diff = " + fmt(worst) + " over 1000 cases (tolerance 1e-12)"};
}

// 5. Uniform-weight quantum average equals the classical 1/H learner average
//    for H in {2, 4, 8}.
Outcome bagging_average() {
    double worst = 0.0;
    for (std::size_t d = 1; d <= 3; ++d) {
        for (std::uint64_t rep = 0; rep < 5; ++rep) {
            gates::Rng rng(0xBA66ULL + 31 * d + rep);
            const double base = rng.uniform(-2.0, 2.0);
            std::vector<double> deltas(d);
            for (double& v : deltas) v = rng.uniform(-2.0, 2.0);
            ensemble::EnsembleSpec spec;
            spec.d = d;
            spec.weak_learner_angles.assign(std::size_t{1} << d, base);
            for (std::size_t h = 0; h < spec.weak_learner_angles.size(); ++h)
                for (std::size_t i = 0; i < d; ++i)
                    if ((h >> i) & 1) spec.weak_learner_angles[h] += deltas[i];
            const ensemble::BaggingOutcome out = ensemble::run_bagging_demo(
                spec, {rng.uniform(0.1, 1.0), rng.uniform(-1.0, 1.0)},
                Observable(gates::projector_one()));
            worst = std::max(worst, out.abs_diff);
        }
    }
    return {worst <= 1e-10,
            "max |quantum - classical| = " + fmt(worst) + " for H in {2,4,8} (tolerance 1e-10)"};
}

// 6. Training on the separable toy set halves the loss and is bitwise
//    reproducible per seed.
Outcome training_property() {
    qslp::ToyDataset data;
    data.points = {
        {{1.00, 0.05}, 0.0}, {{0.95, 0.10}, 0.0}, {{1.00, 0.15}, 0.0},
        {{0.90, 0.00}, 0.0}, {{0.85, 0.12}, 0.0},
        {{0.05, 1.00}, 1.0}, {{0.10, 0.95}, 1.0}, {{0.00, 0.90}, 1.0},
        {{0.15, 1.00}, 1.0}, {{0.08, 0.88}, 1.0},
    };
    qslp::QslpSpec spec;
    spec.d = 2;
    spec.n = 1;
    const qslp::TrainReport a = qslp_train(data, spec, 100, 0.5, 1e-4, 7);
    const qslp::TrainReport b = qslp_train(data, spec, 100, 0.5, 1e-4, 7);

    const bool halved = a.loss_trace.back() <= 0.5 * a.loss_trace.front();
    const bool reproducible =
        a.loss_trace.size() == b.loss_trace.size() &&
        std::memcmp(a.loss_trace.data(), b.loss_trace.data(),
                    a.loss_trace.size() * sizeof(double)) == 0 &&
        a.final_theta == b.final_theta && a.final_beta_params == b.final_beta_params;
    return {halved && reproducible,
            "loss " + fmt(a.loss_trace.front()) + " -> " + fmt(a.loss_trace.back()) +
                " in 100 epochs" + (reproducible ? ", traces bitwise equal" : ", NOT reproducible")};
}

// 7. Finite differences against the closed-form single-rotation derivative,
//    plus step-halving consistency.
Outcome gradient_sanity() {
    qslp::QslpSpec spec;
    spec.d = 1;
    spec.n = 1;
    spec.theta = {0.0, 0.7};
    spec.beta_params = {0.0};
    const auto objective = [&](const std::vector<double>& params) {
        qslp::QslpSpec probe = spec;
        probe.theta = {params[0], params[1]};
        return qslp::qslp_predict({1.0}, probe);
    };
    const auto grad = qslp::central_difference(objective, spec.theta, 1e-4);
    const double analytic = 0.5 * std::sin(0.7);
    const double closed_form_err = std::abs(grad[1] - analytic);

    qslp::ToyDataset data;
    data.points = {{{1.0, 0.1}, 0.0}, {{0.2, 1.0}, 1.0}, {{0.9, 0.3}, 0.0}};
    double halving_err = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        qslp::QslpSpec probe;
        probe.d = 2;
        probe.n = 1;
        gates::Rng rng(0x6AD0ULL + seed);
        probe.theta.resize(probe.theta_count());
        probe.beta_params.resize(probe.d);
        for (double& v : probe.theta) v = rng.uniform(-2.0, 2.0);
        for (double& v : probe.beta_params) v = rng.uniform(-2.0, 2.0);
        const auto coarse = qslp::qslp_gradient_fd(data, probe, 1e-3);
        const auto fine = qslp::qslp_gradient_fd(data, probe, 1e-4);
        for (std::size_t k = 0; k < coarse.size(); ++k)
            halving_err = std::max(halving_err, std::abs(coarse[k] - fine[k]));
    }
    return {closed_form_err <= 1e-6 && halving_err <= 1e-5,
            "closed-form error " + fmt(closed_form_err) + " (tol 1e-6), step-halving drift " +
                fmt(halving_err) + " (tol 1e-5)"};
}

// 8. Numerical hygiene: norms, imaginary residues and weight sums.
Outcome numerical_hygiene() {
    double norm_drift = 0.0;
    double weight_drift = 0.0;
    for (int k = 0; k < 40; ++k) {
        const std::size_t d = static_cast<std::size_t>(k) % 7;
        const std::size_t n = 1 + (static_cast<std::size_t>(k) % 3);
        const MaqaSpec spec = random_maqa_spec(d, n, 0x479EULL + k);
        StateVector s = prepare_state(spec);
        norm_drift = std::max(norm_drift, std::abs(s.norm() - 1.0));
        s = build_trajectories(s, spec);
        norm_drift = std::max(norm_drift, std::abs(s.norm() - 1.0));
        s = apply_interference(s, spec.f_gate);
        norm_drift = std::max(norm_drift, std::abs(s.norm() - 1.0));

        double weights = 0.0;
        for (const TrajectoryComponent& t : oracle_aggregate(spec).per_trajectory)
            weights += t.weight;
        weight_drift = std::max(weight_drift, std::abs(weights - 1.0));
    }

    // raw imaginary residue of the expectation quadratic form
    double residue = 0.0;
    gates::Rng rng(0x1111);
    for (int k = 0; k < 40; ++k) {
        const std::size_t nq = 2 + rng.uniform_index(5);
        const std::size_t n_data = 1 + rng.uniform_index(nq);
        const StateVector psi(nq, gates::random_state_amps(nq, rng));
        const qsim::CMatrix m = gates::random_hermitian(n_data, rng);
        const std::size_t dim = std::size_t{1} << n_data;
        Complex acc{0.0, 0.0};
        const auto& amps = psi.amps();
        for (std::size_t block = 0; block < (psi.dim() >> n_data); ++block)
            for (std::size_t r = 0; r < dim; ++r)
                for (std::size_t c = 0; c < dim; ++c)
                    acc += std::conj(amps[block * dim + r]) * m.a[r * dim + c] *
                           amps[block * dim + c];
        residue = std::max(residue, std::abs(acc.imag()));
    }

    const bool pass = norm_drift <= 1e-12 && residue <= 1e-12 && weight_drift <= 1e-12;
    return {pass, "norm drift " + fmt(norm_drift) + ", imag residue " + fmt(residue) +
                      ", weight-sum drift " + fmt(weight_drift) + " (all <= 1e-12)"};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

const Criterion kCriteria[] = {
    {"aggregation theorem, quantum vs oracle", aggregation_theorem},
    {"d=3 golden block expansion", golden_blocks},
    {"linear depth, exponential breadth", depth_vs_breadth},
    {"x-flip step equivalence", xflip_equivalence},
    {"bagging average, quantum vs classical", bagging_average},
    {"toy training halves the loss, reproducibly", training_property},
    {"finite-difference gradient sanity", gradient_sanity},
    {"numerical hygiene", numerical_hygiene},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
            if (only < 1 || only > 8) {
                std::fprintf(stderr, "criterion must be 1..8\n");
                return 1;
            }
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion <1..8>]\n");
            return 1;
        }
    }

    bool all_pass = true;
    for (int k = 1; k <= 8; ++k) {
        if (only != 0 && k != only) continue;
        const Outcome outcome = kCriteria[k - 1].run();
        std::printf("[%s] criterion %d: %s — %s\n", outcome.pass ? "PASS" : "FAIL", k,
                    kCriteria[k - 1].name, outcome.detail.c_str());
        all_pass = all_pass && outcome.pass;
    }
    return all_pass ? 0 : 1;
}
