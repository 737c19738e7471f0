#ifndef ODEID_SIGNAL_HPP
#define ODEID_SIGNAL_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "odeid/errors.hpp"

namespace odeid {

// One trajectory component as raw (time, value) samples on its own grid.
// Times must be strictly increasing and everything finite; grids of
// different components are allowed to be completely asynchronous.
struct SampledSignal {
    std::vector<double> times;
    std::vector<double> values;
    std::string name;

    SampledSignal(std::vector<double> t, std::vector<double> v, std::string label = "");

    std::size_t size() const { return times.size(); }
    double first_time() const { return times.front(); }
    double last_time() const { return times.back(); }
};

} // namespace odeid

#endif
