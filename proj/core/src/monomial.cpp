#include "odeid/monomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace odeid {

int MultiIndex::total_degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= static_cast<std::uint64_t>(n - i);
        den *= static_cast<std::uint64_t>(i + 1);
    }
    return num / den;
}

MonomialBasis::MonomialBasis(int n, int d, bool with_constant)
    : dimension(n), max_degree(d), include_constant(with_constant) {
    if (n < 1) throw Error("monomial basis: dimension must be positive");
    if (d < 0) throw Error("monomial basis: degree must be non-negative");
    if (!with_constant && d == 0)
        throw Error("monomial basis: degree 0 without the constant term is empty");
}

std::size_t MonomialBasis::size() const {
    return binomial(dimension + max_degree, max_degree) - (include_constant ? 0 : 1);
}

namespace {

void enumerate_rec(int remaining_vars, int remaining_degree, std::vector<int> &current,
                   std::vector<MultiIndex> &out) {
    if (remaining_vars == 1) {
        for (int e = 0; e <= remaining_degree; ++e) {
            current.push_back(e);
            out.push_back(MultiIndex{current});
            current.pop_back();
        }
        return;
    }
    for (int e = 0; e <= remaining_degree; ++e) {
        current.push_back(e);
        enumerate_rec(remaining_vars - 1, remaining_degree - e, current, out);
        current.pop_back();
    }
}

} // namespace

std::vector<MultiIndex> MonomialBasis::enumerate() const {
    std::vector<MultiIndex> out;
    out.reserve(size());
    std::vector<int> current;
    enumerate_rec(dimension, max_degree, current, out);
    if (!include_constant)
        out.erase(out.begin());   // the all-zero index is lexicographically first
    return out;
}

double eval_monomial(const MultiIndex &index, std::span<const double> y) {
    if (static_cast<std::size_t>(index.dimension()) != y.size())
        throw Error("eval_monomial: dimension mismatch (" + std::to_string(index.dimension()) +
                    " vs " + std::to_string(y.size()) + ")");
    double result = 1.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        for (int e = 0; e < index.exponents[i]; ++e) result *= y[i];
    }
    return result;   // empty products give 1, so 0^0 == 1
}

std::vector<int> combination_code(const MultiIndex &index) {
    std::vector<int> code(index.exponents.size());
    int prev = -1;
    for (std::size_t i = 0; i < code.size(); ++i) {
        code[i] = prev + index.exponents[i] + 1;
        prev = code[i];
    }
    // the first entry is e_1 itself: prev starts at -1
    return code;
}

MultiIndex multi_index_from_code(std::span<const int> code) {
    MultiIndex index;
    index.exponents.resize(code.size());
    int prev = -1;
    for (std::size_t i = 0; i < code.size(); ++i) {
        if (code[i] <= prev) throw Error("combination code not strictly increasing");
        index.exponents[i] = code[i] - prev - 1;
        prev = code[i];
    }
    return index;
}

} // namespace odeid
