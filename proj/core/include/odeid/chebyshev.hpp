#ifndef ODEID_CHEBYSHEV_HPP
#define ODEID_CHEBYSHEV_HPP

#include <span>
#include <vector>

#include "odeid/signal.hpp"

namespace odeid {

// Truncated Chebyshev series on a time domain [t_min, t_max].
//
// Coefficients follow the discrete-transform convention: coeffs[0] is stored
// unhalved and evaluation computes  (1/2) coeffs[0] + sum_{k>=1} coeffs[k] T_k(x)
// with x the affine image of t on [-1, 1].
struct ChebSeries {
    std::vector<double> coeffs;
    double t_min;
    double t_max;

    ChebSeries(std::vector<double> c, double a, double b);

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// The `count` roots of T_count mapped onto [t_min, t_max].
// Returned in the natural cos(pi (j+1/2)/count) order, i.e. decreasing in t.
std::vector<double> chebyshev_nodes(int count, double t_min, double t_max);

// Piecewise-linear interpolation of the signal at the query times.
// Exact at the sample points; queries outside the sampled range are errors
// (no extrapolation, ever).
std::vector<double> resample_linear(const SampledSignal &signal, std::span<const double> query_times);

// Discrete Chebyshev fit of order node_count-1: resamples the signal at the
// Chebyshev nodes of its own time span and applies the cosine transform.
ChebSeries fit_chebyshev(const SampledSignal &signal, int node_count);

// Same fit on an explicit window; every node must lie inside the signal's
// sampled range. Used when several components share one solve window.
ChebSeries fit_chebyshev(const SampledSignal &signal, int node_count, double t_min, double t_max);

// First `keep` coefficients, domain unchanged.
ChebSeries truncate(const ChebSeries &series, int keep);

// Clenshaw evaluation at t in [t_min, t_max].
double evaluate(const ChebSeries &series, double t);

// Coefficient-space differentiation via the backwards recurrence
//   a'_{M+1} = a'_M = 0,   a'_{k-1} = a'_{k+1} + 2 k a_k ,
// valid for the standard position [-1, 1]; the result is scaled by
// 2/(t_max - t_min) so it is d/dt on the physical domain. Same length
// and domain as the input.
ChebSeries derivative(const ChebSeries &series);

} // namespace odeid

#endif
