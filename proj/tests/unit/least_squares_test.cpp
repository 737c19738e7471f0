#include <cmath>
#include <random>

#include "doctest.h"
#include "odeid/least_squares.hpp"
#include "oracles.hpp"

using namespace odeid;

namespace {

Matrix random_matrix(std::mt19937 &rng, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    Matrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a(i, j) = val(rng);
    return a;
}

std::vector<double> random_vector(std::mt19937 &rng, std::size_t n) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto &x : v) x = val(rng);
    return v;
}

} // namespace

TEST_CASE("assemble: one-dimensional identity trajectory") {
    // y(t) = t on [-1, 1]: state series T_1, derivative 1
    std::vector<ChebSeries> states{ChebSeries({0.0, 1.0}, -1.0, 1.0)};
    MonomialBasis basis(1, 1, true);
    auto sys = assemble(states, basis, 3);

    REQUIRE(sys.a.rows() == 3);
    REQUIRE(sys.a.cols() == 2);
    CHECK(sys.sample_times == std::vector<double>{-1.0, 0.0, 1.0});
    // rows are [1, y(t_j)]
    CHECK(sys.a(0, 0) == doctest::Approx(1.0));
    CHECK(sys.a(0, 1) == doctest::Approx(-1.0));
    CHECK(sys.a(1, 1) == doctest::Approx(0.0));
    CHECK(sys.a(2, 1) == doctest::Approx(1.0));
    for (double b : sys.rhs[0]) CHECK(b == doctest::Approx(1.0));
}

TEST_CASE("assemble: system shapes of the two worked examples") {
    std::vector<ChebSeries> states{ChebSeries({0.0, 1.0, 0.2}, 0.0, 20.0),
                                   ChebSeries({0.5, -0.3, 0.1}, 0.0, 20.0)};
    auto hare = assemble(states, MonomialBasis(2, 3, false), 150);
    CHECK(hare.a.rows() == 150);
    CHECK(hare.a.cols() == 9);

    auto pendulum = assemble(states, MonomialBasis(2, 4, true), 250);
    CHECK(pendulum.a.rows() == 250);
    CHECK(pendulum.a.cols() == 15);
}

TEST_CASE("assemble: mismatched domains are rejected") {
    std::vector<ChebSeries> states{ChebSeries({0.0, 1.0}, 0.0, 1.0),
                                   ChebSeries({0.0, 1.0}, 0.0, 2.0)};
    CHECK_THROWS_AS(assemble(states, MonomialBasis(2, 2, true), 10), Error);
}

TEST_CASE("solve: identity system returns the right-hand side") {
    GramSystem sys;
    sys.a = Matrix(3, 3);
    for (int i = 0; i < 3; ++i) sys.a(i, i) = 1.0;
    sys.rhs = {{1.5, -2.0, 0.25}};
    sys.sample_times = {0.0, 0.5, 1.0};
    auto sol = solve(sys);
    CHECK(sol.coeffs[0][0] == doctest::Approx(1.5));
    CHECK(sol.coeffs[0][1] == doctest::Approx(-2.0));
    CHECK(sol.coeffs[0][2] == doctest::Approx(0.25));
    CHECK(sol.scaled_residuals[0] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("solve: overdetermined column of ones averages the data") {
    GramSystem sys;
    sys.a = Matrix(3, 1, 1.0);
    sys.rhs = {{1.0, 2.0, 3.0}};
    sys.sample_times = {0.0, 0.5, 1.0};
    auto sol = solve(sys);
    CHECK(sol.coeffs[0][0] == doctest::Approx(2.0).epsilon(1e-14));
    // residual (-1, 0, 1): ||r||/sqrt(3) = sqrt(2)/sqrt(3)
    CHECK(sol.scaled_residuals[0] ==
          doctest::Approx(std::sqrt(2.0) / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("solve: agrees with the normal-equations oracle") {
    std::mt19937 rng(33);
    GramSystem sys;
    sys.a = random_matrix(rng, 40, 6);
    sys.rhs = {random_vector(rng, 40)};
    sys.sample_times = random_vector(rng, 40);
    auto sol = solve(sys);
    auto want = oracles::normal_equations_solve(sys.a, sys.rhs[0]);
    for (std::size_t j = 0; j < want.size(); ++j)
        CHECK(std::abs(sol.coeffs[0][j] - want[j]) <= 1e-8 * std::max(1.0, std::abs(want[j])));
}

TEST_CASE("invariant: residual is orthogonal to the column space") {
    std::mt19937 rng(34);
    for (int trial = 0; trial < 5; ++trial) {
        GramSystem sys;
        sys.a = random_matrix(rng, 50, 8);
        sys.rhs = {random_vector(rng, 50), random_vector(rng, 50)};
        sys.sample_times = random_vector(rng, 50);
        auto sol = solve(sys);
        for (std::size_t k = 0; k < sys.rhs.size(); ++k) {
            auto ac = matvec(sys.a, sol.coeffs[k]);
            std::vector<double> r(ac.size());
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = ac[i] - sys.rhs[k][i];
            auto atr = matvec_transposed(sys.a, r);
            auto atb = matvec_transposed(sys.a, sys.rhs[k]);
            CHECK(norm2(atr) <= 1e-8 * norm2(atb));
        }
    }
}

TEST_CASE("invariant: solutions are unchanged by column permutation") {
    std::mt19937 rng(35);
    GramSystem sys;
    sys.a = random_matrix(rng, 30, 5);
    sys.rhs = {random_vector(rng, 30)};
    sys.sample_times = random_vector(rng, 30);
    auto sol = solve(sys);

    std::vector<std::size_t> perm = {3, 0, 4, 1, 2};
    GramSystem shuffled = sys;
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 5; ++j) shuffled.a(i, j) = sys.a(i, perm[j]);
    auto sol2 = solve(shuffled);

    for (std::size_t j = 0; j < 5; ++j)
        CHECK(std::abs(sol2.coeffs[0][j] - sol.coeffs[0][perm[j]]) <= 1e-12);
    CHECK(std::abs(sol2.scaled_residuals[0] - sol.scaled_residuals[0]) <= 1e-12);
}

TEST_CASE("invariant: exact models are recovered exactly") {
    std::mt19937 rng(36);
    GramSystem sys;
    sys.a = random_matrix(rng, 60, 7);
    auto c_true = random_vector(rng, 7);
    sys.rhs = {matvec(sys.a, c_true)};
    sys.sample_times = random_vector(rng, 60);
    auto sol = solve(sys);
    for (std::size_t j = 0; j < c_true.size(); ++j)
        CHECK(std::abs(sol.coeffs[0][j] - c_true[j]) <= 1e-9 * std::max(1.0, std::abs(c_true[j])));
    CHECK(sol.scaled_residuals[0] <= 1e-10);
}

TEST_CASE("solve: rank deficiency is reported, not regularized") {
    GramSystem sys;
    sys.a = Matrix(6, 3);
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (std::size_t i = 0; i < 6; ++i) {
        sys.a(i, 0) = val(rng);
        sys.a(i, 1) = 2.0 * sys.a(i, 0);   // exact duplicate direction
        sys.a(i, 2) = val(rng);
    }
    sys.rhs = {random_vector(rng, 6)};
    sys.sample_times = random_vector(rng, 6);
    try {
        solve(sys);
        FAIL("expected RankDeficiencyError");
    } catch (const RankDeficiencyError &e) {
        CHECK(e.estimated_rank() == 2);
    }

    GramSystem wide;
    wide.a = Matrix(2, 3, 1.0);
    wide.rhs = {{1.0, 2.0}};
    wide.sample_times = {0.0, 1.0};
    CHECK_THROWS_AS(solve(wide), Error);
}
