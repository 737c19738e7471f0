#include "odeid/gauss_newton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <utility>

#include <boost/math/distributions/students_t.hpp>

#include "json.hpp"
#include "odeid/numfmt.hpp"

namespace odeid {

namespace {

double scaled_norm(std::span<const double> r) {
    return norm2(r) / std::sqrt(static_cast<double>(r.size()));
}

double correction_scale(std::span<const double> params) {
    return std::max(1.0, norm2(params));
}

} // namespace

GnResult refine_residual(const ResidualFn &residual_fn, std::vector<double> start,
                         const GnConfig &config) {
    if (start.empty()) throw Error("refine: no free parameters");
    if (!(config.fc_min > 0.0) || config.fc_min > config.fc_start || config.fc_start > 1.0)
        throw Error("refine: need 0 < fc_min <= fc_start <= 1");
    if (!(config.ptol > 0.0)) throw Error("refine: ptol must be positive");

    GnResult result;
    result.params = std::move(start);
    const std::size_t p = result.params.size();

    std::vector<double> r;
    try {
        r = residual_fn(result.params);
    } catch (const IntegrationError &e) {
        result.failure_reason = std::string("starting point not integrable: ") + e.what();
        return result;
    }
    if (r.size() < p)
        result.failure_reason = "warning: fewer residual rows than parameters";
    result.residual_size = static_cast<int>(r.size());

    double prev_correction = -1.0;
    Matrix jac(r.size(), p);
    std::vector<double> last_good_r = r;

    for (int it = 0; it < config.max_iter; ++it) {
        // forward-difference Jacobian, one residual evaluation per column
        bool jac_ok = true;
        for (std::size_t j = 0; j < p && jac_ok; ++j) {
            double step = config.fd_step * std::abs(result.params[j]);
            if (step < 1e-8) step = 1e-8;
            auto perturbed = result.params;
            perturbed[j] += step;
            try {
                auto rj = residual_fn(perturbed);
                for (std::size_t i = 0; i < r.size(); ++i) jac(i, j) = (rj[i] - r[i]) / step;
            } catch (const IntegrationError &) {
                perturbed[j] = result.params[j] - step;   // try the other side
                try {
                    auto rj = residual_fn(perturbed);
                    for (std::size_t i = 0; i < r.size(); ++i) jac(i, j) = (r[i] - rj[i]) / step;
                } catch (const IntegrationError &e) {
                    result.failure_reason =
                        std::string("jacobian not computable at the current iterate: ") + e.what();
                    jac_ok = false;
                }
            }
        }
        if (!jac_ok) break;

        std::vector<double> neg_r(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) neg_r[i] = -r[i];
        std::vector<double> delta;
        try {
            PivotedQr qr(jac);
            delta = qr.solve(neg_r);
        } catch (const Error &e) {
            result.failure_reason = std::string("correction solve failed: ") + e.what();
            break;
        }

        const double normx = norm2(delta) / correction_scale(result.params);
        const double normf = scaled_norm(r);

        if (prev_correction >= 0.0 && prev_correction > 0.0)
            result.kappa = norm2(delta) / prev_correction;
        prev_correction = norm2(delta);

        if (normx < config.ptol) {
            // converged: keep the final (tiny) correction applied
            for (std::size_t j = 0; j < p; ++j) result.params[j] += delta[j];
            result.iterations.push_back({it, normf, normx, 1.0});
            result.converged = true;
            try {
                auto r_final = residual_fn(result.params);
                last_good_r = r_final;
            } catch (const IntegrationError &) {
                // final polish failed; fall back to the accepted iterate
                for (std::size_t j = 0; j < p; ++j) result.params[j] -= delta[j];
            }
            break;
        }

        // damped step with residual-norm monotonicity: the first iteration
        // starts from fc_start, later ones from the full correction
        double lambda = (it == 0) ? config.fc_start : 1.0;
        bool accepted = false;
        while (true) {
            auto trial = result.params;
            for (std::size_t j = 0; j < p; ++j) trial[j] += lambda * delta[j];
            bool usable = true;
            std::vector<double> r_trial;
            try {
                r_trial = residual_fn(trial);
            } catch (const IntegrationError &) {
                usable = false;   // left the integrable region: treat as rejection
            }
            if (usable && norm2(r_trial) < norm2(r)) {
                result.params = std::move(trial);
                r = std::move(r_trial);
                last_good_r = r;
                result.iterations.push_back({it, normf, normx, lambda});
                accepted = true;
                break;
            }
            lambda *= 0.5;
            if (lambda < config.fc_min) break;
        }
        if (!accepted) {
            result.failure_reason = "damping factor underflow below fc_min (residual norm " +
                                    format_full(scaled_norm(r)) + ")";
            break;
        }
        if (static_cast<int>(result.iterations.size()) >= config.max_iter) break;
    }

    if (!result.converged && result.failure_reason.empty())
        result.failure_reason = "maximum number of iterations reached";

    // final statistics from the Jacobian at the solution
    if (result.converged && last_good_r.size() > p) {
        try {
            bool ok = true;
            for (std::size_t j = 0; j < p && ok; ++j) {
                double step = config.fd_step * std::abs(result.params[j]);
                if (step < 1e-8) step = 1e-8;
                auto perturbed = result.params;
                perturbed[j] += step;
                try {
                    auto rj = residual_fn(perturbed);
                    for (std::size_t i = 0; i < last_good_r.size(); ++i)
                        jac(i, j) = (rj[i] - last_good_r[i]) / step;
                } catch (const IntegrationError &) {
                    ok = false;
                }
            }
            if (ok) result.statistics = compute_statistics(jac, last_good_r, result.params);
        } catch (const RankDeficiencyError &) {
            // rank-deficient final Jacobian: statistics stay unavailable
        }
    }
    return result;
}

std::vector<double> initial_params(const FitProblem &problem) {
    std::vector<double> params;
    for (int k = 0; k < problem.model.dimension(); ++k)
        for (std::size_t l = 0; l < problem.model.terms.size(); ++l)
            if (problem.model.active[k][l]) params.push_back(problem.model.coeffs[k][l]);
    if (params.empty()) throw Error("fit problem: model has no active terms");
    return params;
}

RecoveredModel apply_params(const FitProblem &problem, std::span<const double> params) {
    RecoveredModel model = problem.model;
    std::size_t idx = 0;
    for (int k = 0; k < model.dimension(); ++k)
        for (std::size_t l = 0; l < model.terms.size(); ++l)
            if (model.active[k][l]) {
                if (idx >= params.size()) throw Error("apply_params: parameter vector too short");
                model.coeffs[k][l] = params[idx++];
            }
    if (idx != params.size()) throw Error("apply_params: parameter vector too long");
    return model;
}

std::vector<double> fit_residual(const FitProblem &problem, std::span<const double> params) {
    for (double v : params)
        if (!std::isfinite(v))
            throw IntegrationError("fit_residual: non-finite parameter", 0.0, {});
    RecoveredModel model = apply_params(problem, params);

    const double t0 = problem.data.front().first_time();
    for (const auto &s : problem.data)
        if (s.first_time() != t0) throw Error("fit_residual: components must start together");

    std::set<double> time_union;
    double t_end = t0;
    for (const auto &s : problem.data) {
        time_union.insert(s.times.begin(), s.times.end());
        t_end = std::max(t_end, s.last_time());
    }
    std::vector<double> times(time_union.begin(), time_union.end());

    IvpProblem ivp;
    ivp.rhs = [&model](std::span<const double> y, std::span<double> dydt) {
        auto f = rhs_eval(model, y);
        std::copy(f.begin(), f.end(), dydt.begin());
    };
    for (const auto &s : problem.data) ivp.y0.push_back(s.values.front());
    ivp.t0 = t0;
    ivp.t_end = t_end;
    ivp.rtol = problem.rtol;
    ivp.atol = problem.atol;

    auto traj = solve_ivp(ivp, times);

    std::vector<double> r;
    for (std::size_t k = 0; k < problem.data.size(); ++k) {
        const auto &sig = problem.data[k];
        for (std::size_t j = 0; j < sig.times.size(); ++j) {
            auto it = std::lower_bound(times.begin(), times.end(), sig.times[j]);
            r.push_back(traj.states[it - times.begin()][k] - sig.values[j]);
        }
    }
    return r;
}

GnResult refine(const FitProblem &problem, const GnConfig &config) {
    auto residual = [&problem](std::span<const double> params) {
        return fit_residual(problem, params);
    };
    return refine_residual(residual, initial_params(problem), config);
}

GnStatistics compute_statistics(const Matrix &jacobian, std::span<const double> residual,
                                std::span<const double> params) {
    const int rows = static_cast<int>(jacobian.rows());
    const int p = static_cast<int>(jacobian.cols());
    if (rows <= p) throw Error("statistics: need more residual rows than parameters");

    PivotedQr qr(jacobian);
    Matrix cov = qr.inverse_normal_matrix();   // throws RankDeficiencyError when singular

    GnStatistics stats;
    stats.dof = rows - p;
    double rr = 0.0;
    for (double v : residual) rr += v * v;
    stats.s2 = rr / stats.dof;

    boost::math::students_t dist(stats.dof);
    const double tq = boost::math::quantile(dist, 0.975);

    for (int j = 0; j < p; ++j) {
        double sd = std::sqrt(std::max(0.0, stats.s2 * cov(j, j)));
        stats.sigma.push_back(sd);
        stats.sigma_pct.push_back(params[j] != 0.0 ? 100.0 * sd / std::abs(params[j]) : 0.0);
        stats.conf_lo.push_back(params[j] - tq * sd);
        stats.conf_hi.push_back(params[j] + tq * sd);
    }
    return stats;
}

std::string format_refinement_report(const GnResult &result, const GnConfig &config) {
    std::ostringstream out;
    char buf[160];

    out << " Damped Gauss-Newton fit of the recovered coefficients\n\n";
    out << " Number of parameters to be estimated : "
        << result.params.size() << "\n";
    out << " Number of data to be fitted : " << result.residual_size << "\n";
    std::snprintf(buf, sizeof(buf), " Prescribed relative precision (PTOL) : %s\n",
                  fortran_d(config.ptol, 2).c_str());
    out << buf;
    std::snprintf(buf, sizeof(buf), " Starting damping factor FCSTART = %s\n",
                  fortran_d(config.fc_start, 2).c_str());
    out << buf;
    std::snprintf(buf, sizeof(buf), " Minimum allowed damping factor FCMIN = %s\n",
                  fortran_d(config.fc_min, 2).c_str());
    out << buf;
    out << " Maximum permitted number of iteration steps : " << config.max_iter << "\n\n";

    out << "    It       Normf               Normx       Damp.Fct.\n";
    for (const auto &step : result.iterations) {
        std::snprintf(buf, sizeof(buf), "  %4d      %s       %s      %5.3f\n", step.index,
                      fortran_d(step.normf, 7).c_str(), fortran_d(step.normx, 3).c_str(),
                      step.damping);
        out << buf;
    }
    out << "\n";
    if (result.converged) {
        out << " Solution of nonlinear least squares problem obtained\n within "
            << result.iterations.size() << " iteration steps\n\n";
        std::snprintf(buf, sizeof(buf), " Incompatibility factor kappa %s\n",
                      fortran_d(result.kappa, 3).c_str());
        out << buf;
    } else {
        out << " Iteration failed: " << result.failure_reason << "\n";
    }

    if (result.statistics) {
        const auto &st = *result.statistics;
        out << "\n   Standard deviation of parameters\n";
        out << "   --------------------------------\n";
        out << "     No.  Estimate           sigma(X)\n";
        for (std::size_t j = 0; j < result.params.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "    %3zu  %11s   +/-  %11s     = %8.2f %%\n", j + 1,
                          fortran_d(result.params[j], 3).c_str(), fortran_d(st.sigma[j], 3).c_str(),
                          st.sigma_pct[j]);
            out << buf;
        }
        out << "\n   Independent confidence intervals\n";
        out << "   --------------------------------\n";
        out << "   (on 95 % confidence level)\n\n";
        for (std::size_t j = 0; j < result.params.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "    %3zu  ( %11s , %11s )\n", j + 1,
                          fortran_d(st.conf_lo[j], 3).c_str(), fortran_d(st.conf_hi[j], 3).c_str());
            out << buf;
        }
    }
    return out.str();
}

std::string refinement_to_json(const GnResult &result) {
    nlohmann::json j;
    j["converged"] = result.converged;
    j["parameters"] = result.params;
    j["kappa"] = result.kappa;
    j["residual_rows"] = result.residual_size;
    if (!result.failure_reason.empty()) j["failure_reason"] = result.failure_reason;
    nlohmann::json its = nlohmann::json::array();
    for (const auto &step : result.iterations)
        its.push_back({{"it", step.index},
                       {"normf", step.normf},
                       {"normx", step.normx},
                       {"damping", step.damping}});
    j["iterations"] = its;
    if (result.statistics) {
        j["statistics"] = {{"sigma", result.statistics->sigma},
                           {"sigma_pct", result.statistics->sigma_pct},
                           {"conf_lo", result.statistics->conf_lo},
                           {"conf_hi", result.statistics->conf_hi},
                           {"dof", result.statistics->dof},
                           {"s2", result.statistics->s2}};
    }
    return j.dump(2) + "\n";
}

} // namespace odeid
