#ifndef ODEID_INTEGRATE_HPP
#define ODEID_INTEGRATE_HPP

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "odeid/model.hpp"
#include "odeid/signal.hpp"

namespace odeid {

using RhsFn = std::function<void(std::span<const double> y, std::span<double> dydt)>;

struct IvpProblem {
    RhsFn rhs;
    std::vector<double> y0;
    double t0 = 0.0;
    double t_end = 1.0;
    double rtol = 1e-9;
    double atol = 1e-9;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
};

// Adaptive Dormand-Prince RK5(4) with error-per-step control
// (tolerance atol + rtol |y|, safety 0.9, step factor clamped to [0.2, 5]).
// Output times are hit exactly by step landing. Throws IntegrationError on
// step-size underflow below 1e-12 (t_end - t0); that is the observable
// "model not integrable" condition and is meant to be caught.
Trajectory solve_ivp(const IvpProblem &problem, std::span<const double> output_times);

// Damped pendulum  angle' = velocity,  velocity' = -damping velocity
// - (gravity/length) sin(angle),  integrated at rtol = atol = 1e-9 and
// sampled at `sample_count` equidistant times on [0, t_end].
std::pair<SampledSignal, SampledSignal> generate_pendulum_data(double damping, double length,
                                                               double gravity,
                                                               std::array<double, 2> y0,
                                                               double t_end, int sample_count);

struct VerificationReport {
    bool integrable = false;
    std::string failure_reason;
    std::vector<double> rms;   // per component, over that component's sample times
    Trajectory trajectory;     // model solution at the union of all sample times
};

// Integrates the recovered model from the first data row and reports the
// per-component RMS discrepancy against the samples. All components must
// start at the same time. Integration failure yields integrable = false
// instead of propagating.
VerificationReport verify(const RecoveredModel &model, const std::vector<SampledSignal> &data,
                          double rtol = 1e-9, double atol = 1e-9);

std::string format_verification_report(const VerificationReport &report,
                                       const std::vector<SampledSignal> &data);

} // namespace odeid

#endif
