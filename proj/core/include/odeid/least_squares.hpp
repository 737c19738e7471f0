#ifndef ODEID_LEAST_SQUARES_HPP
#define ODEID_LEAST_SQUARES_HPP

#include <vector>

#include "odeid/chebyshev.hpp"
#include "odeid/linalg.hpp"
#include "odeid/monomial.hpp"

namespace odeid {

// The regression system b^(k) = A c^(k): row j of A holds every basis
// monomial evaluated at the reconstructed state y*(t_j); b^(k) holds the
// derivative of component k at the same times.
struct GramSystem {
    Matrix a;                                 // m x basis size
    std::vector<std::vector<double>> rhs;     // n vectors of length m
    std::vector<double> sample_times;         // m equidistant times
};

// Builds the system from per-component state series and their derivative
// series on m equidistant times spanning the (shared) domain, endpoints
// included. All components must agree on the domain.
GramSystem assemble(const std::vector<ChebSeries> &states,
                    const std::vector<ChebSeries> &state_derivatives,
                    const MonomialBasis &basis, int sample_count);

// Convenience form: derivatives computed from the state series themselves.
GramSystem assemble(const std::vector<ChebSeries> &states, const MonomialBasis &basis,
                    int sample_count);

struct LsqSolution {
    std::vector<std::vector<double>> coeffs;   // n x basis size
    std::vector<double> scaled_residuals;      // ||A c - b||_2 / sqrt(m) per component
};

// Column-pivoted QR least squares; one factorization shared by all
// right-hand sides. Refuses rank-deficient systems.
LsqSolution solve(const GramSystem &system);

} // namespace odeid

#endif
