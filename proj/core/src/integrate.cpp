#include "odeid/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "odeid/numfmt.hpp"

namespace odeid {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
// difference between the 5th and the embedded 4th order weights
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace

Trajectory solve_ivp(const IvpProblem &problem, std::span<const double> output_times) {
    const std::size_t n = problem.y0.size();
    if (n == 0) throw Error("solve_ivp: empty state");
    if (!(problem.t0 < problem.t_end)) throw Error("solve_ivp: need t0 < t_end");
    if (!(problem.rtol > 0.0) || !(problem.atol > 0.0))
        throw Error("solve_ivp: tolerances must be positive");
    for (std::size_t i = 1; i < output_times.size(); ++i)
        if (!(output_times[i - 1] < output_times[i]))
            throw Error("solve_ivp: output times not increasing");
    if (!output_times.empty() &&
        (output_times.front() < problem.t0 || output_times.back() > problem.t_end))
        throw Error("solve_ivp: output times outside [t0, t_end]");

    const double span = problem.t_end - problem.t0;
    const double h_min = 1e-12 * span;

    Trajectory traj;
    double t = problem.t0;
    std::vector<double> y = problem.y0;
    std::size_t next_out = 0;
    auto record_if_requested = [&](double tc, const std::vector<double> &yc) {
        while (next_out < output_times.size() && output_times[next_out] == tc) {
            traj.times.push_back(tc);
            traj.states.push_back(yc);
            ++next_out;
        }
    };
    record_if_requested(t, y);

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
    double h = span / 100.0;
    long steps = 0;
    const long max_steps = 50'000'000;

    while (t < problem.t_end) {
        if (++steps > max_steps)
            throw IntegrationError("solve_ivp: step budget exhausted at t = " + format_full(t), t, y);
        double target = (next_out < output_times.size()) ? output_times[next_out] : problem.t_end;
        double h_try = h;
        bool landing = false;
        if (t + h_try >= target) {
            h_try = target - t;
            landing = true;
        }

        problem.rhs(y, k1);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h_try * A21 * k1[i];
        problem.rhs(ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h_try * (A31 * k1[i] + A32 * k2[i]);
        problem.rhs(ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h_try * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        problem.rhs(ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h_try * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        problem.rhs(ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] +
                      h_try * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        problem.rhs(ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h_try * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        problem.rhs(ynew, k7);
        for (std::size_t i = 0; i < n; ++i)
            err[i] = h_try *
                     (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);

        double err_norm;
        if (!all_finite(ynew) || !all_finite(err)) {
            err_norm = std::numeric_limits<double>::infinity();
        } else {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double sc = problem.atol + problem.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                s += (err[i] / sc) * (err[i] / sc);
            }
            err_norm = std::sqrt(s / static_cast<double>(n));
        }

        double factor = 0.2;
        if (err_norm == 0.0)
            factor = 5.0;
        else if (std::isfinite(err_norm))
            factor = std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);

        if (err_norm <= 1.0) {
            t = landing ? target : t + h_try;
            y = ynew;
            record_if_requested(t, y);
            // a landing step may be arbitrarily short; keep the controller's
            // proposal alive instead of collapsing onto it
            h = landing ? std::max(h, h_try * factor) : h_try * factor;
        } else {
            h = h_try * factor;
            if (h < h_min)
                throw IntegrationError("solve_ivp: step size underflow at t = " + format_full(t), t,
                                       y);
        }
    }
    return traj;
}

std::pair<SampledSignal, SampledSignal> generate_pendulum_data(double damping, double length,
                                                               double gravity,
                                                               std::array<double, 2> y0,
                                                               double t_end, int sample_count) {
    if (sample_count < 2) throw Error("generate_pendulum_data: need at least two samples");
    if (length <= 0.0) throw Error("generate_pendulum_data: length must be positive");

    IvpProblem problem;
    problem.rhs = [damping, length, gravity](std::span<const double> y, std::span<double> dydt) {
        dydt[0] = y[1];
        dydt[1] = -damping * y[1] - gravity / length * std::sin(y[0]);
    };
    problem.y0 = {y0[0], y0[1]};
    problem.t0 = 0.0;
    problem.t_end = t_end;
    problem.rtol = 1e-9;
    problem.atol = 1e-9;

    std::vector<double> times(sample_count);
    for (int i = 0; i < sample_count; ++i) times[i] = t_end * i / (sample_count - 1);
    times.back() = t_end;

    auto traj = solve_ivp(problem, times);
    std::vector<double> angle(sample_count), velocity(sample_count);
    for (int i = 0; i < sample_count; ++i) {
        angle[i] = traj.states[i][0];
        velocity[i] = traj.states[i][1];
    }
    return {SampledSignal(times, std::move(angle), "theta1"),
            SampledSignal(std::move(times), std::move(velocity), "theta2")};
}

VerificationReport verify(const RecoveredModel &model, const std::vector<SampledSignal> &data,
                          double rtol, double atol) {
    if (static_cast<int>(data.size()) != model.dimension())
        throw Error("verify: component count mismatch");
    const double t0 = data.front().first_time();
    for (const auto &s : data)
        if (s.first_time() != t0)
            throw Error("verify: all components must start at the same time");

    std::set<double> time_union;
    double t_end = t0;
    for (const auto &s : data) {
        time_union.insert(s.times.begin(), s.times.end());
        t_end = std::max(t_end, s.last_time());
    }
    std::vector<double> times(time_union.begin(), time_union.end());

    IvpProblem problem;
    problem.rhs = [&model](std::span<const double> y, std::span<double> dydt) {
        auto f = rhs_eval(model, y);
        std::copy(f.begin(), f.end(), dydt.begin());
    };
    for (const auto &s : data) problem.y0.push_back(s.values.front());
    problem.t0 = t0;
    problem.t_end = t_end;
    problem.rtol = rtol;
    problem.atol = atol;

    VerificationReport report;
    try {
        report.trajectory = solve_ivp(problem, times);
    } catch (const IntegrationError &e) {
        report.integrable = false;
        report.failure_reason = e.what();
        return report;
    }
    report.integrable = true;

    for (std::size_t k = 0; k < data.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < data[k].times.size(); ++j) {
            auto it = std::lower_bound(times.begin(), times.end(), data[k].times[j]);
            const auto &state = report.trajectory.states[it - times.begin()];
            double d = state[k] - data[k].values[j];
            s += d * d;
        }
        report.rms.push_back(std::sqrt(s / static_cast<double>(data[k].times.size())));
    }
    return report;
}

std::string format_verification_report(const VerificationReport &report,
                                       const std::vector<SampledSignal> &data) {
    std::ostringstream out;
    if (!report.integrable) {
        out << "verdict: model not integrable\n";
        out << "reason: " << report.failure_reason << "\n";
        return out.str();
    }
    for (std::size_t k = 0; k < report.rms.size(); ++k) {
        out << "component " << (k < data.size() ? data[k].name : std::to_string(k))
            << ": rms = " << format_full(report.rms[k]) << " over "
            << data[k].times.size() << " samples\n";
    }
    out << "verdict: integrable\n";
    return out.str();
}

} // namespace odeid
