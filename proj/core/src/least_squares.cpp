#include "odeid/least_squares.hpp"

#include <cmath>
#include <string>

namespace odeid {

namespace {

std::vector<double> equidistant(double a, double b, int count) {
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i) t[i] = a + (b - a) * i / (count - 1);
    t.back() = b;
    return t;
}

} // namespace

GramSystem assemble(const std::vector<ChebSeries> &states,
                    const std::vector<ChebSeries> &state_derivatives,
                    const MonomialBasis &basis, int sample_count) {
    if (states.empty()) throw Error("assemble: no components");
    if (states.size() != state_derivatives.size())
        throw Error("assemble: state/derivative count mismatch");
    if (sample_count < 2) throw Error("assemble: need at least two sample times");
    const double t0 = states.front().t_min;
    const double t1 = states.front().t_max;
    for (const auto &s : states)
        if (s.t_min != t0 || s.t_max != t1)
            throw Error("assemble: components disagree on the time domain");
    for (const auto &s : state_derivatives)
        if (s.t_min != t0 || s.t_max != t1)
            throw Error("assemble: derivative domain mismatch");
    const int n = static_cast<int>(states.size());
    if (basis.dimension != n)
        throw Error("assemble: basis dimension " + std::to_string(basis.dimension) +
                    " does not match " + std::to_string(n) + " components");

    GramSystem sys;
    sys.sample_times = equidistant(t0, t1, sample_count);
    const auto terms = basis.enumerate();
    sys.a = Matrix(sample_count, terms.size());
    sys.rhs.assign(n, std::vector<double>(sample_count, 0.0));

    std::vector<double> y(n);
    for (int j = 0; j < sample_count; ++j) {
        const double t = sys.sample_times[j];
        for (int k = 0; k < n; ++k) {
            y[k] = evaluate(states[k], t);
            sys.rhs[k][j] = evaluate(state_derivatives[k], t);
        }
        for (std::size_t l = 0; l < terms.size(); ++l)
            sys.a(j, l) = eval_monomial(terms[l], y);
    }
    return sys;
}

GramSystem assemble(const std::vector<ChebSeries> &states, const MonomialBasis &basis,
                    int sample_count) {
    std::vector<ChebSeries> ders;
    ders.reserve(states.size());
    for (const auto &s : states) ders.push_back(derivative(s));
    return assemble(states, ders, basis, sample_count);
}

LsqSolution solve(const GramSystem &system) {
    const std::size_t m = system.a.rows();
    if (m < system.a.cols())
        throw Error("solve: underdetermined system (" + std::to_string(m) + " rows, " +
                    std::to_string(system.a.cols()) + " columns)");

    PivotedQr qr(system.a);   // factored once, reused for every component

    LsqSolution sol;
    sol.coeffs.reserve(system.rhs.size());
    sol.scaled_residuals.reserve(system.rhs.size());
    for (const auto &b : system.rhs) {
        auto c = qr.solve(b);
        auto ac = matvec(system.a, c);
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += (ac[i] - b[i]) * (ac[i] - b[i]);
        sol.scaled_residuals.push_back(std::sqrt(s) / std::sqrt(static_cast<double>(m)));
        sol.coeffs.push_back(std::move(c));
    }
    return sol;
}

} // namespace odeid
