#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "odeid/chebyshev.hpp"
#include "oracles.hpp"

using namespace odeid;

TEST_CASE("chebyshev nodes: forced small cases") {
    auto one = chebyshev_nodes(1, -1.0, 1.0);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(0.0).epsilon(1e-15));

    auto two = chebyshev_nodes(2, -1.0, 1.0);
    CHECK(two[0] == doctest::Approx(0.7071067811865476).epsilon(1e-14));
    CHECK(two[1] == doctest::Approx(-0.7071067811865476).epsilon(1e-14));
}

TEST_CASE("chebyshev nodes: affine image onto [0, 10]") {
    // frozen values of 5 + 5 cos(pi (j+1/2)/4)
    auto nodes = chebyshev_nodes(4, 0.0, 10.0);
    REQUIRE(nodes.size() == 4);
    CHECK(nodes[0] == doctest::Approx(9.6193976625564337).epsilon(1e-14));
    CHECK(nodes[1] == doctest::Approx(6.9134171618254488).epsilon(1e-14));
    CHECK(nodes[2] == doctest::Approx(3.0865828381745512).epsilon(1e-14));
    CHECK(nodes[3] == doctest::Approx(0.3806023374435663).epsilon(1e-13));
    for (std::size_t i = 1; i < nodes.size(); ++i) CHECK(nodes[i] < nodes[i - 1]);
    for (double t : nodes) {
        CHECK(t > 0.0);
        CHECK(t < 10.0);
    }
}

TEST_CASE("chebyshev nodes: argument errors") {
    CHECK_THROWS_AS(chebyshev_nodes(0, 0.0, 1.0), Error);
    CHECK_THROWS_AS(chebyshev_nodes(5, 1.0, 1.0), Error);
    CHECK_THROWS_AS(chebyshev_nodes(5, 2.0, 1.0), Error);
}

TEST_CASE("resample_linear: interpolation basics") {
    SampledSignal line({0.0, 1.0}, {0.0, 2.0});
    CHECK(resample_linear(line, std::vector<double>{0.5})[0] == doctest::Approx(1.0));

    SampledSignal flat({0.0, 2.0, 4.0}, {5.0, 5.0, 5.0});
    auto r = resample_linear(flat, std::vector<double>{1.0, 3.0});
    CHECK(r[0] == doctest::Approx(5.0));
    CHECK(r[1] == doctest::Approx(5.0));

    SampledSignal kinked({0.0, 1.0, 2.0}, {0.0, 1.0, 4.0});
    CHECK(resample_linear(kinked, std::vector<double>{1.5})[0] == doctest::Approx(2.5));

    // exact at the sample points, including both ends
    auto at_samples = resample_linear(kinked, kinked.times);
    for (std::size_t i = 0; i < at_samples.size(); ++i) CHECK(at_samples[i] == kinked.values[i]);

    CHECK_THROWS_AS(resample_linear(kinked, std::vector<double>{-0.1}), Error);
    CHECK_THROWS_AS(resample_linear(kinked, std::vector<double>{2.1}), Error);
}

TEST_CASE("fit: constant signal projects onto T_0 only") {
    const double c = 3.25;
    SampledSignal sig({0.0, 1.0, 2.0, 3.0}, {c, c, c, c});
    auto series = fit_chebyshev(sig, 9);
    CHECK(series.coeffs[0] == doctest::Approx(2.0 * c).epsilon(1e-14));
    for (std::size_t k = 1; k < series.coeffs.size(); ++k)
        CHECK(std::abs(series.coeffs[k]) < 1e-13);
    CHECK(evaluate(series, 1.7) == doctest::Approx(c).epsilon(1e-14));
}

TEST_CASE("fit: identity signal gives the T_1 coefficient") {
    // dense samples of g(t) = t on [-1, 1]: linear interpolation is exact
    std::vector<double> t, v;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(-1.0 + 2.0 * i / 400.0);
        v.push_back(t.back());
    }
    auto series = fit_chebyshev(SampledSignal(t, v), 4);
    CHECK(series.coeffs[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(series.coeffs[0]) < 1e-13);
    CHECK(std::abs(series.coeffs[2]) < 1e-13);
    CHECK(std::abs(series.coeffs[3]) < 1e-13);
}

TEST_CASE("fit: degree-2 polynomial at the transform nodes is exact") {
    auto parabola = [](double t) { return 2.0 * t * t - 1.0; };
    auto sig = oracles::node_sampled_signal(parabola, -1.0, 1.0, 4);
    auto series = fit_chebyshev(sig, 4);
    REQUIRE(series.coeffs.size() == 4);
    CHECK(std::abs(series.coeffs[0]) < 1e-14);
    CHECK(std::abs(series.coeffs[1]) < 1e-14);
    CHECK(series.coeffs[2] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(series.coeffs[3]) < 1e-14);
}

TEST_CASE("truncate: bounds and the filtering effect on noisy data") {
    ChebSeries series({1.0, 2.0, 3.0}, 0.0, 1.0);
    auto same = truncate(series, 3);
    CHECK(same.coeffs == series.coeffs);
    auto one = truncate(series, 1);
    CHECK(one.coeffs == std::vector<double>{1.0});
    CHECK(one.t_min == 0.0);
    CHECK(one.t_max == 1.0);
    CHECK_THROWS_AS(truncate(series, 0), Error);
    CHECK_THROWS_AS(truncate(series, 4), Error);

    // noisy sine: an 11-term truncation of the 80-node fit tracks the clean
    // sine better than the full fit
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> noise(-0.1, 0.1);
    std::vector<double> t, v;
    const double b = 2.0 * std::numbers::pi;
    for (int i = 0; i <= 300; ++i) {
        t.push_back(b * i / 300.0);
        v.push_back(std::sin(t.back()) + noise(rng));
    }
    auto full = fit_chebyshev(SampledSignal(t, v), 80);
    auto cut = truncate(full, 11);
    double err_full = 0.0, err_cut = 0.0;
    for (int i = 0; i <= 500; ++i) {
        double x = b * i / 500.0;
        err_full = std::max(err_full, std::abs(evaluate(full, x) - std::sin(x)));
        err_cut = std::max(err_cut, std::abs(evaluate(cut, x) - std::sin(x)));
    }
    CHECK(err_cut < err_full);
}

TEST_CASE("evaluate: low-order series and domain checks") {
    ChebSeries constant({2.0 * 7.5, 0.0, 0.0}, -3.0, 5.0);
    CHECK(evaluate(constant, -3.0) == doctest::Approx(7.5));
    CHECK(evaluate(constant, 4.2) == doctest::Approx(7.5));

    ChebSeries t1({0.0, 1.0}, -1.0, 1.0);
    CHECK(evaluate(t1, 0.3) == doctest::Approx(0.3).epsilon(1e-15));

    ChebSeries t2({0.0, 0.0, 1.0}, -1.0, 1.0);
    CHECK(evaluate(t2, 0.5) == doctest::Approx(-0.5).epsilon(1e-15));

    CHECK_THROWS_AS(evaluate(t1, 1.0000001), Error);
    CHECK_THROWS_AS(evaluate(t1, -1.0000001), Error);
}

TEST_CASE("derivative: recurrence on T_2 and constants") {
    ChebSeries t2({0.0, 0.0, 1.0}, -1.0, 1.0);
    auto der = derivative(t2);
    REQUIRE(der.coeffs.size() == 3);
    CHECK(der.coeffs[0] == doctest::Approx(0.0));
    CHECK(der.coeffs[1] == doctest::Approx(4.0));   // d/dt (2t^2 - 1) = 4t
    CHECK(der.coeffs[2] == doctest::Approx(0.0));

    ChebSeries constant({4.0}, 0.0, 2.0);
    auto dc = derivative(constant);
    CHECK(dc.coeffs == std::vector<double>{0.0});
}

TEST_CASE("derivative: chain-rule scaling against finite differences") {
    ChebSeries series({0.0, 0.0, 1.0}, 0.0, 10.0);
    auto der = derivative(series);
    const double h = 1e-6;
    for (double t : {1.0, 3.7, 5.0, 8.2}) {
        double fd = (evaluate(series, t + h) - evaluate(series, t - h)) / (2.0 * h);
        double an = evaluate(der, t);
        CHECK(std::abs(an - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("invariant: polynomial exactness through fit and evaluate") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const int degree = 5;
    std::vector<double> mono(degree + 1);
    for (auto &c : mono) c = coeff(rng);
    const double a = 1.0, b = 4.0;
    auto poly = [&](double t) {
        double x = (2.0 * t - (a + b)) / (b - a);
        double r = 0.0;
        for (int k = degree; k >= 0; --k) r = r * x + mono[k];
        return r;
    };
    auto sig = oracles::node_sampled_signal(poly, a, b, degree + 1);
    auto series = fit_chebyshev(sig, degree + 1);
    std::uniform_real_distribution<double> pick(a, b);
    for (int i = 0; i < 50; ++i) {
        double t = pick(rng);
        double want = poly(t);
        CHECK(std::abs(evaluate(series, t) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("invariant: derivative consistency for smooth signals") {
    for (auto [f, df, name] :
         {std::tuple<double (*)(double), double (*)(double), const char *>{
              [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); }, "sin"},
          {[](double t) { return std::exp(t); }, [](double t) { return std::exp(t); }, "exp"}}) {
        CAPTURE(name);
        const double a = 0.0, b = 3.0;
        auto sig = oracles::node_sampled_signal(f, a, b, 31);
        auto series = fit_chebyshev(sig, 31);
        auto der = derivative(series);
        const double h = 1e-6 * (b - a);
        for (int i = 1; i <= 50; ++i) {
            double t = a + (b - a) * i / 52.0;
            double fd = (evaluate(series, t + h) - evaluate(series, t - h)) / (2.0 * h);
            CHECK(std::abs(evaluate(der, t) - fd) <= 1e-4);
        }
    }
}

TEST_CASE("invariant: fit is linear in the data") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::vector<double> t, g, h;
    for (int i = 0; i <= 40; ++i) {
        t.push_back(i / 40.0);
        g.push_back(val(rng));
        h.push_back(val(rng));
    }
    const double alpha = 1.7, beta = -0.6;
    std::vector<double> mix(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) mix[i] = alpha * g[i] + beta * h[i];

    auto fg = fit_chebyshev(SampledSignal(t, g), 12);
    auto fh = fit_chebyshev(SampledSignal(t, h), 12);
    auto fmix = fit_chebyshev(SampledSignal(t, mix), 12);
    for (std::size_t k = 0; k < fmix.coeffs.size(); ++k)
        CHECK(std::abs(fmix.coeffs[k] - (alpha * fg.coeffs[k] + beta * fh.coeffs[k])) <= 1e-12);
}

TEST_CASE("invariant: coefficients ignore the absolute time scale") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    std::vector<double> t1, t2, v;
    for (int i = 0; i <= 30; ++i) {
        t1.push_back(2.0 + i / 10.0);
        t2.push_back(t1.back() / 2.0);
        v.push_back(val(rng));
    }
    auto f1 = fit_chebyshev(SampledSignal(t1, v), 10);
    auto f2 = fit_chebyshev(SampledSignal(t2, v), 10);
    for (std::size_t k = 0; k < f1.coeffs.size(); ++k)
        CHECK(std::abs(f1.coeffs[k] - f2.coeffs[k]) <= 1e-12);
}

TEST_CASE("signal validation") {
    CHECK_THROWS_AS(SampledSignal({0.0}, {1.0}), Error);
    CHECK_THROWS_AS(SampledSignal({0.0, 1.0}, {1.0}), Error);
    CHECK_THROWS_AS(SampledSignal({0.0, 0.0}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(SampledSignal({1.0, 0.5}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(SampledSignal({0.0, std::nan("")}, {1.0, 2.0}), Error);
}
