#ifndef ODEID_MONOMIAL_HPP
#define ODEID_MONOMIAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "odeid/errors.hpp"

namespace odeid {

struct MultiIndex {
    std::vector<int> exponents;

    int dimension() const { return static_cast<int>(exponents.size()); }
    int total_degree() const;

    friend bool operator==(const MultiIndex &, const MultiIndex &) = default;
};

std::uint64_t binomial(int n, int k);

// Family of multivariate monomials y_1^{e_1} ... y_n^{e_n} with total degree
// at most max_degree, optionally without the constant term.
struct MonomialBasis {
    int dimension = 1;
    int max_degree = 0;
    bool include_constant = true;

    MonomialBasis() = default;
    MonomialBasis(int n, int d, bool with_constant = true);

    // C(n+d, d), minus one when the constant is excluded.
    std::size_t size() const;

    // All member indices in lexicographic ascending order of the exponent
    // tuples; this is also ascending order of the combination codes and
    // matches the report listing order.
    std::vector<MultiIndex> enumerate() const;
};

// Product of powers with the convention 0^0 = 1.
double eval_monomial(const MultiIndex &index, std::span<const double> y);

// Stars-and-bars code (c_1, ..., c_n): c_1 = e_1 and c_i = c_{i-1} + e_i + 1.
// Strictly increasing; bijective over any basis enumeration.
std::vector<int> combination_code(const MultiIndex &index);
MultiIndex multi_index_from_code(std::span<const int> code);

} // namespace odeid

#endif
