#ifndef ODEID_NUMFMT_HPP
#define ODEID_NUMFMT_HPP

#include <string>

namespace odeid {

// Shortest representation that round-trips through strtod.
std::string format_full(double value);

// Fortran D-exponent style with a normalized mantissa, e.g.
// fortran_d(8.345461, 7) == "0.8345461D+01". Used by the refinement report.
std::string fortran_d(double value, int significant_digits);

} // namespace odeid

#endif
