#ifndef ODEID_GAUSS_NEWTON_HPP
#define ODEID_GAUSS_NEWTON_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "odeid/integrate.hpp"
#include "odeid/linalg.hpp"
#include "odeid/model.hpp"
#include "odeid/signal.hpp"

namespace odeid {

struct GnConfig {
    double ptol = 1e-3;      // relative precision for the correction norm
    int max_iter = 40;
    double fc_start = 0.01;  // damping factor for the first step
    double fc_min = 0.01;    // halving floor before the iteration fails
    double fd_step = 1e-6;   // relative forward-difference step
};

struct GnIteration {
    int index;
    double normf;    // ||r||_2 / sqrt(#rows) at the iterate
    double normx;    // scaled norm of the accepted correction
    double damping;  // accepted damping factor
};

struct GnStatistics {
    std::vector<double> sigma;      // standard deviation per parameter
    std::vector<double> sigma_pct;  // sigma as a percentage of |estimate|
    std::vector<double> conf_lo;    // 95% confidence interval bounds
    std::vector<double> conf_hi;
    int dof = 0;
    double s2 = 0.0;                // residual variance ||r||^2 / dof
};

struct GnResult {
    std::vector<double> params;
    std::vector<GnIteration> iterations;
    double kappa = 0.0;     // ratio of the norms of the last two corrections
    bool converged = false;
    std::string failure_reason;
    std::optional<GnStatistics> statistics;
    int residual_size = 0;
};

// Residual evaluation; may throw IntegrationError for parameter values that
// make the trial model non-integrable (treated as a rejected trial step).
using ResidualFn = std::function<std::vector<double>(std::span<const double> params)>;

// Damped Gauss-Newton on an arbitrary residual: forward-difference Jacobian,
// pivoted-QR correction, residual-norm monotonicity test with halving.
// The first step is damped by fc_start; later steps start from the full
// correction. Statistics are attached when the final Jacobian has full rank.
GnResult refine_residual(const ResidualFn &residual_fn, std::vector<double> start,
                         const GnConfig &config);

// Coefficient refinement of a recovered model against raw data. The active
// coefficients are the free parameters (enumeration order, component-major);
// the initial state is pinned to the first data row and never fitted.
struct FitProblem {
    RecoveredModel model;
    std::vector<SampledSignal> data;
    double rtol = 1e-9;
    double atol = 1e-9;
};

// Free parameters of the problem in their canonical order.
std::vector<double> initial_params(const FitProblem &problem);

// Copy of the model with the free parameters substituted.
RecoveredModel apply_params(const FitProblem &problem, std::span<const double> params);

// Concatenated model-minus-data differences over every component's
// sample times, component-major.
std::vector<double> fit_residual(const FitProblem &problem, std::span<const double> params);

GnResult refine(const FitProblem &problem, const GnConfig &config);

// sigma and 95% confidence intervals from the final Jacobian and residual:
// covariance s^2 (J^T J)^{-1} with s^2 = ||r||^2 / (#rows - #params) and
// Student-t quantiles on #rows - #params degrees of freedom.
GnStatistics compute_statistics(const Matrix &jacobian, std::span<const double> residual,
                                std::span<const double> params);

// Iteration table and statistics block in a classic damped-Gauss-Newton
// protocol layout (Fortran D-exponent numbers).
std::string format_refinement_report(const GnResult &result, const GnConfig &config);

// Machine-readable copy of the result.
std::string refinement_to_json(const GnResult &result);

} // namespace odeid

#endif
