#ifndef ODEID_PIPELINE_HPP
#define ODEID_PIPELINE_HPP

#include <string>
#include <vector>

#include "odeid/dataset.hpp"
#include "odeid/least_squares.hpp"
#include "odeid/model.hpp"

namespace odeid {

struct RunConfig {
    int cheb_nodes = 80;        // node count of the per-component fit
    int cheb_truncation = 62;   // leading coefficients kept for evaluation
                                // (11 suits rough data, 62 smooth data)
    int max_degree = 3;
    bool include_constant = true;
    int solve_grid = 150;       // equidistant regression times
    double threshold_pct = 0.1;
    double rtol = 1e-9;
    double atol = 1e-9;

    // Default: differentiate the full-order fit, then truncate both series
    // to cheb_truncation terms. The alternative truncates first and
    // differentiates the truncated series.
    bool truncate_before_derivative = false;

    // Optional experiment: re-solve each component on its active columns
    // after thresholding. Off by default; coefficients are kept verbatim.
    bool refit_active_terms = false;
};

struct ReconstructionResult {
    RecoveredModel model;
    LsqSolution solution;
    std::vector<ChebSeries> state_series;       // truncated, shared window
    std::vector<ChebSeries> derivative_series;  // matching truncation
    std::string protocol_text;                  // all components
};

// Full pipeline: restrict to the shared window, fit each component,
// truncate/differentiate, assemble the regression system on the solve grid,
// solve, threshold, format. Errors carry the failing stage in their message.
ReconstructionResult reconstruct(const Dataset &dataset, const RunConfig &config);

} // namespace odeid

#endif
