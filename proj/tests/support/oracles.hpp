// Independent reference computations for the test suites. Everything here
// deliberately avoids the solver paths it is used to check.
#ifndef ODEID_TESTS_ORACLES_HPP
#define ODEID_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "odeid/linalg.hpp"
#include "odeid/signal.hpp"

namespace oracles {

// Least-squares solution via the normal equations A^T A c = A^T b, solved by
// Gaussian elimination with partial pivoting. Dense and direct; no QR.
inline std::vector<double> normal_equations_solve(const odeid::Matrix &a,
                                                  const std::vector<double> &b) {
    const std::size_t n = a.cols();
    std::vector<std::vector<double>> ata(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, i) * a(r, j);
            ata[i][j] = s;
        }
        double s = 0.0;
        for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, i) * b[r];
        ata[i][n] = s;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(ata[i][k]) > std::abs(ata[pivot][k])) pivot = i;
        std::swap(ata[k], ata[pivot]);
        if (ata[k][k] == 0.0) throw std::runtime_error("normal equations oracle: singular");
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = ata[i][k] / ata[k][k];
            for (std::size_t j = k; j <= n; ++j) ata[i][j] -= f * ata[k][j];
        }
    }
    std::vector<double> c(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = ata[i][n];
        for (std::size_t j = i + 1; j < n; ++j) s -= ata[i][j] * c[j];
        c[i] = s / ata[i][i];
    }
    return c;
}

// Number of n-variate exponent tuples with total degree <= d, by exhaustive
// odometer enumeration (no binomial formula).
inline std::size_t count_multi_indices(int n, int d) {
    std::vector<int> e(n, 0);
    std::size_t count = 0;
    while (true) {
        int total = 0;
        for (int v : e) total += v;
        if (total <= d) ++count;
        int pos = n - 1;
        while (pos >= 0) {
            if (++e[pos] <= d) break;
            e[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return count;
}

// Standard error of the no-intercept regression y = p t.
inline double line_fit_sigma(const std::vector<double> &t, const std::vector<double> &y) {
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    double p = sty / stt;
    double rss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double r = p * t[i] - y[i];
        rss += r * r;
    }
    double s2 = rss / static_cast<double>(t.size() - 1);
    return std::sqrt(s2 / stt);
}

// Signal built from exact function values at the Chebyshev nodes of [a, b]
// plus the two endpoints, so fitting with `nodes` nodes resamples without
// interpolation error.
inline odeid::SampledSignal node_sampled_signal(const std::function<double(double)> &f, double a,
                                                double b, int nodes, const std::string &name = "s") {
    std::vector<double> t;
    t.push_back(a);
    for (int j = nodes - 1; j >= 0; --j)
        t.push_back(0.5 * (a + b) + 0.5 * (b - a) * std::cos(std::numbers::pi * (j + 0.5) / nodes));
    t.push_back(b);
    std::vector<double> v;
    for (double x : t) v.push_back(f(x));
    return odeid::SampledSignal(std::move(t), std::move(v), name);
}

// Central-difference Jacobian of a residual function.
inline odeid::Matrix central_difference_jacobian(
    const std::function<std::vector<double>(const std::vector<double> &)> &fn,
    std::vector<double> params, double step) {
    auto r0 = fn(params);
    odeid::Matrix jac(r0.size(), params.size());
    for (std::size_t j = 0; j < params.size(); ++j) {
        double h = step * std::max(1.0, std::abs(params[j]));
        auto plus = params, minus = params;
        plus[j] += h;
        minus[j] -= h;
        auto rp = fn(plus), rm = fn(minus);
        for (std::size_t i = 0; i < r0.size(); ++i) jac(i, j) = (rp[i] - rm[i]) / (2.0 * h);
    }
    return jac;
}

} // namespace oracles

#endif
