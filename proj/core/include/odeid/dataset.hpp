#ifndef ODEID_DATASET_HPP
#define ODEID_DATASET_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "odeid/signal.hpp"

namespace odeid {

// Named trajectory components, possibly on independent time grids.
// The usable window is the overlap of all component spans.
struct Dataset {
    std::vector<SampledSignal> components;

    double window_start() const;   // max over first sample times
    double window_end() const;     // min over last sample times
};

// Reads a UTF-8, LF/CRLF-tolerant CSV with a mandatory header row.
// Two layouts:
//   wide:  t,<name1>,<name2>,...      one shared grid
//   long:  component,t,value          one row per sample, any grids
// The long layout is selected when the first header field is "component".
Dataset load_dataset(const std::filesystem::path &path);

// Full-precision CSV writer (shortest round-trip floats, LF line ends).
// NaN cells are written empty.
void write_csv(const std::filesystem::path &path, const std::vector<std::string> &header,
               const std::vector<std::vector<double>> &columns);

// Wide-format dump of components sharing one grid.
void save_dataset_wide(const std::filesystem::path &path, const std::vector<SampledSignal> &components);

} // namespace odeid

#endif
