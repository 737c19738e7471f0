#ifndef ODEID_MODEL_HPP
#define ODEID_MODEL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "odeid/least_squares.hpp"
#include "odeid/monomial.hpp"

namespace odeid {

// Thresholded polynomial right-hand side recovered from data. Keeps every
// fitted coefficient; `active` marks the terms whose magnitude reaches
// threshold_pct percent of the component's largest coefficient, and only
// those terms take part in evaluation.
struct RecoveredModel {
    MonomialBasis basis;
    std::vector<MultiIndex> terms;                 // basis.enumerate(), cached
    std::vector<std::vector<double>> coeffs;       // n x basis size
    std::vector<std::vector<std::uint8_t>> active; // n x basis size masks
    double threshold_pct = 0.0;
    double t_min = 0.0;
    double t_max = 1.0;
    std::vector<std::string> component_names;

    int dimension() const { return static_cast<int>(coeffs.size()); }
};

// Applies the percentage threshold to a least-squares solution. Coefficient
// values are kept verbatim; only the active masks depend on pct.
RecoveredModel threshold(const LsqSolution &solution, const MonomialBasis &basis, double pct,
                         double t_min, double t_max, std::vector<std::string> component_names);

// Percentages of one component's coefficients relative to their absolute
// maximum (all zero for an all-zero component).
std::vector<double> coefficient_percentages(const RecoveredModel &model, int component);

// f(y) of the recovered system, active terms only.
std::vector<double> rhs_eval(const RecoveredModel &model, std::span<const double> y);

// Report block for one component: per-term rows
//   [ code ] --> [exponents]   percentage
// followed by the monomial count with the threshold, the recovered equation
// with 2-significant-digit coefficients, and the scaled residual.
std::string format_protocol(const LsqSolution &solution, const RecoveredModel &model,
                            int component);

// Re-solves each component restricted to its active columns and replaces the
// active coefficient values (inactive stay verbatim but masked). Optional
// experiment, not part of the default pipeline.
LsqSolution refit_active(const GramSystem &system, const RecoveredModel &model);

} // namespace odeid

#endif
