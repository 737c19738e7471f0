#ifndef ODEID_LINALG_HPP
#define ODEID_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "odeid/errors.hpp"

namespace odeid {

// Dense row-major matrix. Only what the solvers here need.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

std::vector<double> matvec(const Matrix &a, std::span<const double> x);
std::vector<double> matvec_transposed(const Matrix &a, std::span<const double> x);
double norm2(std::span<const double> x);

// Householder QR with column pivoting, A P = Q R, for m >= n.
// The factorization is computed once and can solve any number of
// right-hand sides in the least-squares sense.
class PivotedQr {
  public:
    explicit PivotedQr(const Matrix &a);

    // Numerical rank with the relative diagonal test |r_kk| >= tol |r_00|.
    int rank(double rel_tol = 1e-12) const;
    bool full_rank(double rel_tol = 1e-12) const { return rank(rel_tol) == cols_; }

    // min ||A x - b||_2. Throws RankDeficiencyError instead of regularizing
    // when the diagonal test fails.
    std::vector<double> solve(std::span<const double> b, double rank_rel_tol = 1e-12) const;

    // (A^T A)^{-1} = P R^{-1} R^{-T} P^T, in the original column order.
    // Used for covariance estimates; requires full rank.
    Matrix inverse_normal_matrix(double rank_rel_tol = 1e-12) const;

  private:
    int rows_, cols_;
    Matrix qr_;                 // R in the upper triangle, Householder vectors below
    std::vector<double> beta_;  // 2 / (v^T v) per reflector
    std::vector<int> perm_;     // column j of the factorization is column perm_[j] of A
};

} // namespace odeid

#endif
