#include "odeid/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "odeid/numfmt.hpp"

namespace odeid {

double Dataset::window_start() const {
    double t = components.front().first_time();
    for (const auto &c : components) t = std::max(t, c.first_time());
    return t;
}

double Dataset::window_end() const {
    double t = components.front().last_time();
    for (const auto &c : components) t = std::min(t, c.last_time());
    return t;
}

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string strip(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string &field, std::size_t line_no) {
    const std::string s = strip(field);
    if (s.empty()) throw Error("csv line " + std::to_string(line_no) + ": empty numeric field");
    errno = 0;
    char *end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE)
        throw Error("csv line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
    return v;
}

} // namespace

Dataset load_dataset(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw Error("dataset file is empty: " + path.string());
    auto header = split_csv_line(line);
    for (auto &h : header) h = strip(h);
    if (header.size() < 2) throw Error("dataset header needs at least two columns");

    Dataset ds;
    std::size_t line_no = 1;

    if (header[0] == "component") {
        // long format: component,t,value
        if (header.size() != 3 || header[1] != "t" || header[2] != "value")
            throw Error("long-format header must be component,t,value");
        std::vector<std::string> order;                         // first-seen component order
        std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> rows;
        while (std::getline(in, line)) {
            ++line_no;
            if (strip(line).empty()) continue;
            auto f = split_csv_line(line);
            if (f.size() != 3)
                throw Error("csv line " + std::to_string(line_no) + ": expected 3 fields");
            std::string name = strip(f[0]);
            if (name.empty())
                throw Error("csv line " + std::to_string(line_no) + ": empty component name");
            if (!rows.count(name)) order.push_back(name);
            auto &[ts, vs] = rows[name];
            ts.push_back(parse_number(f[1], line_no));
            vs.push_back(parse_number(f[2], line_no));
        }
        for (const auto &name : order) {
            auto &[ts, vs] = rows[name];
            ds.components.emplace_back(std::move(ts), std::move(vs), name);
        }
    } else {
        // wide format: t,name1,name2,...
        if (header[0] != "t") throw Error("wide-format header must start with column 't'");
        const std::size_t n = header.size() - 1;
        std::vector<double> times;
        std::vector<std::vector<double>> values(n);
        while (std::getline(in, line)) {
            ++line_no;
            if (strip(line).empty()) continue;
            auto f = split_csv_line(line);
            if (f.size() != header.size())
                throw Error("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields");
            times.push_back(parse_number(f[0], line_no));
            for (std::size_t k = 0; k < n; ++k) values[k].push_back(parse_number(f[k + 1], line_no));
        }
        for (std::size_t k = 0; k < n; ++k)
            ds.components.emplace_back(times, std::move(values[k]), header[k + 1]);
    }

    if (ds.components.empty()) throw Error("dataset has no components: " + path.string());
    if (!(ds.window_start() < ds.window_end()))
        throw Error("dataset components have no overlapping time window");
    return ds;
}

void write_csv(const std::filesystem::path &path, const std::vector<std::string> &header,
               const std::vector<std::vector<double>> &columns) {
    if (columns.size() != header.size()) throw Error("write_csv: header/column count mismatch");
    std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto &c : columns)
        if (c.size() != rows) throw Error("write_csv: ragged columns");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (k) out << ",";
        out << header[k];
    }
    out << "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (k) out << ",";
            if (!std::isnan(columns[k][i])) out << format_full(columns[k][i]);
        }
        out << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

void save_dataset_wide(const std::filesystem::path &path,
                       const std::vector<SampledSignal> &components) {
    if (components.empty()) throw Error("save_dataset_wide: no components");
    std::vector<std::string> header{"t"};
    std::vector<std::vector<double>> columns{components.front().times};
    for (const auto &c : components) {
        if (c.times != components.front().times)
            throw Error("save_dataset_wide: components do not share a grid");
        header.push_back(c.name);
        columns.push_back(c.values);
    }
    write_csv(path, header, columns);
}

} // namespace odeid
