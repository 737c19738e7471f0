#include "odeid/signal.hpp"

#include <utility>

namespace odeid {

SampledSignal::SampledSignal(std::vector<double> t, std::vector<double> v, std::string label)
    : times(std::move(t)), values(std::move(v)), name(std::move(label)) {
    if (times.size() < 2)
        throw Error("signal '" + name + "': needs at least two samples");
    if (times.size() != values.size())
        throw Error("signal '" + name + "': time/value length mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
            throw Error("signal '" + name + "': non-finite sample");
        if (i > 0 && !(times[i - 1] < times[i]))
            throw Error("signal '" + name + "': times not strictly increasing");
    }
}

} // namespace odeid
