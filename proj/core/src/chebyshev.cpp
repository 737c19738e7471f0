#include "odeid/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace odeid {

ChebSeries::ChebSeries(std::vector<double> c, double a, double b)
    : coeffs(std::move(c)), t_min(a), t_max(b) {
    if (coeffs.empty()) throw Error("chebyshev series: no coefficients");
    if (!(t_min < t_max)) throw Error("chebyshev series: degenerate domain");
    for (double v : coeffs)
        if (!std::isfinite(v)) throw Error("chebyshev series: non-finite coefficient");
}

std::vector<double> chebyshev_nodes(int count, double t_min, double t_max) {
    if (count < 1) throw Error("chebyshev_nodes: count must be positive");
    if (!(t_min < t_max)) throw Error("chebyshev_nodes: degenerate domain");
    const double mid = 0.5 * (t_min + t_max);
    const double half = 0.5 * (t_max - t_min);
    std::vector<double> nodes(count);
    for (int j = 0; j < count; ++j)
        nodes[j] = mid + half * std::cos(std::numbers::pi * (j + 0.5) / count);
    return nodes;
}

std::vector<double> resample_linear(const SampledSignal &signal, std::span<const double> query_times) {
    std::vector<double> out;
    out.reserve(query_times.size());
    const auto &t = signal.times;
    const auto &v = signal.values;
    for (double q : query_times) {
        if (q < t.front() || q > t.back())
            throw Error("resample_linear: query " + std::to_string(q) + " outside data range [" +
                        std::to_string(t.front()) + ", " + std::to_string(t.back()) + "]");
        auto it = std::upper_bound(t.begin(), t.end(), q);
        if (it == t.end()) {
            out.push_back(v.back());   // q == last sample
            continue;
        }
        std::size_t hi = static_cast<std::size_t>(it - t.begin());
        if (hi == 0) {
            out.push_back(v.front());
            continue;
        }
        std::size_t lo = hi - 1;
        double w = (q - t[lo]) / (t[hi] - t[lo]);
        out.push_back(v[lo] + w * (v[hi] - v[lo]));
    }
    return out;
}

namespace {

ChebSeries transform_at_nodes(std::span<const double> node_values, double t_min, double t_max) {
    const int m = static_cast<int>(node_values.size());
    std::vector<double> coeffs(m, 0.0);
    for (int k = 0; k < m; ++k) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j)
            sum += node_values[j] * std::cos(std::numbers::pi * k * (j + 0.5) / m);
        coeffs[k] = 2.0 / m * sum;
    }
    return ChebSeries(std::move(coeffs), t_min, t_max);
}

} // namespace

ChebSeries fit_chebyshev(const SampledSignal &signal, int node_count) {
    return fit_chebyshev(signal, node_count, signal.first_time(), signal.last_time());
}

ChebSeries fit_chebyshev(const SampledSignal &signal, int node_count, double t_min, double t_max) {
    if (node_count < 1) throw Error("fit_chebyshev: node count must be positive");
    auto nodes = chebyshev_nodes(node_count, t_min, t_max);
    auto values = resample_linear(signal, nodes);
    return transform_at_nodes(values, t_min, t_max);
}

ChebSeries truncate(const ChebSeries &series, int keep) {
    if (keep < 1 || keep > static_cast<int>(series.coeffs.size()))
        throw Error("truncate: keep=" + std::to_string(keep) + " outside [1, " +
                    std::to_string(series.coeffs.size()) + "]");
    return ChebSeries(std::vector<double>(series.coeffs.begin(), series.coeffs.begin() + keep),
                      series.t_min, series.t_max);
}

double evaluate(const ChebSeries &series, double t) {
    if (t < series.t_min || t > series.t_max)
        throw Error("evaluate: t=" + std::to_string(t) + " outside [" +
                    std::to_string(series.t_min) + ", " + std::to_string(series.t_max) + "]");
    const double x = (2.0 * t - (series.t_min + series.t_max)) / (series.t_max - series.t_min);
    const double x2 = 2.0 * x;
    double d = 0.0, dd = 0.0;
    const auto &c = series.coeffs;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
        double sv = d;
        d = x2 * d - dd + c[k];
        dd = sv;
    }
    return x * d - dd + 0.5 * c[0];
}

ChebSeries derivative(const ChebSeries &series) {
    const int m = static_cast<int>(series.coeffs.size());   // M + 1 coefficients
    std::vector<double> der(m + 1, 0.0);                    // indices 0..M plus the M+1 guard
    for (int k = m - 1; k >= 1; --k)
        der[k - 1] = der[k + 1] + 2.0 * k * series.coeffs[k];
    der.resize(m);
    const double scale = 2.0 / (series.t_max - series.t_min);
    for (double &v : der) v *= scale;
    return ChebSeries(std::move(der), series.t_min, series.t_max);
}

} // namespace odeid
