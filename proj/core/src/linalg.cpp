#include "odeid/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace odeid {

std::vector<double> matvec(const Matrix &a, std::span<const double> x) {
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> matvec_transposed(const Matrix &a, std::span<const double> x) {
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += a(i, j) * x[i];
    return y;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

PivotedQr::PivotedQr(const Matrix &a)
    : rows_(static_cast<int>(a.rows())), cols_(static_cast<int>(a.cols())), qr_(a),
      beta_(a.cols(), 0.0), perm_(a.cols()) {
    if (rows_ < cols_)
        throw Error("pivoted qr: need at least as many rows as columns (" +
                    std::to_string(rows_) + " x " + std::to_string(cols_) + ")");
    std::iota(perm_.begin(), perm_.end(), 0);

    for (int k = 0; k < cols_; ++k) {
        // pivot on the largest remaining column norm
        int pivot = k;
        double best = -1.0;
        for (int j = k; j < cols_; ++j) {
            double s = 0.0;
            for (int i = k; i < rows_; ++i) s += qr_(i, j) * qr_(i, j);
            if (s > best) { best = s; pivot = j; }
        }
        if (pivot != k) {
            for (int i = 0; i < rows_; ++i) std::swap(qr_(i, k), qr_(i, pivot));
            std::swap(perm_[k], perm_[pivot]);
        }

        // Householder reflector for column k
        double norm = std::sqrt(best);
        if (norm == 0.0) { beta_[k] = 0.0; continue; }
        double alpha = qr_(k, k) >= 0 ? -norm : norm;
        double v0 = qr_(k, k) - alpha;
        qr_(k, k) = alpha;
        // store v scaled so v[0] = 1 below the diagonal
        for (int i = k + 1; i < rows_; ++i) qr_(i, k) /= v0;
        beta_[k] = -v0 / alpha;   // = 2 / (v^T v) for the scaled reflector

        for (int j = k + 1; j < cols_; ++j) {
            double s = qr_(k, j);
            for (int i = k + 1; i < rows_; ++i) s += qr_(i, k) * qr_(i, j);
            s *= beta_[k];
            qr_(k, j) -= s;
            for (int i = k + 1; i < rows_; ++i) qr_(i, j) -= s * qr_(i, k);
        }
    }
}

int PivotedQr::rank(double rel_tol) const {
    double r00 = std::abs(qr_(0, 0));
    if (r00 == 0.0) return 0;
    int r = 0;
    for (int k = 0; k < cols_; ++k)
        if (std::abs(qr_(k, k)) >= rel_tol * r00) ++r; else break;
    return r;
}

std::vector<double> PivotedQr::solve(std::span<const double> b, double rank_rel_tol) const {
    if (static_cast<int>(b.size()) != rows_) throw Error("pivoted qr solve: rhs length mismatch");
    int rk = rank(rank_rel_tol);
    if (rk < cols_)
        throw RankDeficiencyError("pivoted qr solve: rank deficient (estimated rank " +
                                  std::to_string(rk) + " of " + std::to_string(cols_) + ")", rk);

    // apply Q^T
    std::vector<double> y(b.begin(), b.end());
    for (int k = 0; k < cols_; ++k) {
        if (beta_[k] == 0.0) continue;
        double s = y[k];
        for (int i = k + 1; i < rows_; ++i) s += qr_(i, k) * y[i];
        s *= beta_[k];
        y[k] -= s;
        for (int i = k + 1; i < rows_; ++i) y[i] -= s * qr_(i, k);
    }

    // back substitution on the leading triangle
    std::vector<double> z(cols_, 0.0);
    for (int i = cols_ - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < cols_; ++j) s -= qr_(i, j) * z[j];
        z[i] = s / qr_(i, i);
    }

    std::vector<double> x(cols_, 0.0);
    for (int j = 0; j < cols_; ++j) x[perm_[j]] = z[j];
    return x;
}

Matrix PivotedQr::inverse_normal_matrix(double rank_rel_tol) const {
    if (rank(rank_rel_tol) < cols_)
        throw RankDeficiencyError("inverse normal matrix: rank deficient", rank(rank_rel_tol));

    // columns of R^{-1} by back substitution
    Matrix rinv(cols_, cols_, 0.0);
    for (int col = 0; col < cols_; ++col) {
        for (int i = col; i >= 0; --i) {
            double s = (i == col) ? 1.0 : 0.0;
            for (int j = i + 1; j <= col; ++j) s -= qr_(i, j) * rinv(j, col);
            rinv(i, col) = s / qr_(i, i);
        }
    }

    // S = R^{-1} R^{-T}, then undo the column permutation
    Matrix out(cols_, cols_, 0.0);
    for (int i = 0; i < cols_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (int k = std::max(i, j); k < cols_; ++k) s += rinv(i, k) * rinv(j, k);
            out(perm_[i], perm_[j]) = s;
        }
    }
    return out;
}

} // namespace odeid
