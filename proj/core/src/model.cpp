#include "odeid/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>

#include "odeid/numfmt.hpp"

namespace odeid {

RecoveredModel threshold(const LsqSolution &solution, const MonomialBasis &basis, double pct,
                         double t_min, double t_max, std::vector<std::string> component_names) {
    if (pct < 0.0 || pct > 100.0) throw Error("threshold: percentage outside [0, 100]");
    RecoveredModel model{basis, basis.enumerate(), solution.coeffs, {}, pct, t_min, t_max,
                         std::move(component_names)};
    const std::size_t terms = model.terms.size();
    for (const auto &c : solution.coeffs)
        if (c.size() != terms) throw Error("threshold: coefficient count does not match basis");
    if (model.component_names.size() != solution.coeffs.size())
        throw Error("threshold: one name per component required");

    model.active.resize(model.coeffs.size());
    for (std::size_t k = 0; k < model.coeffs.size(); ++k) {
        model.active[k].assign(terms, 0);
        double maxabs = 0.0;
        for (double c : model.coeffs[k]) maxabs = std::max(maxabs, std::abs(c));
        if (maxabs == 0.0) continue;   // all-zero component keeps an empty active set
        for (std::size_t l = 0; l < terms; ++l)
            if (100.0 * std::abs(model.coeffs[k][l]) / maxabs >= pct) model.active[k][l] = 1;
    }
    return model;
}

std::vector<double> coefficient_percentages(const RecoveredModel &model, int component) {
    const auto &c = model.coeffs.at(component);
    double maxabs = 0.0;
    for (double v : c) maxabs = std::max(maxabs, std::abs(v));
    std::vector<double> pct(c.size(), 0.0);
    if (maxabs == 0.0) return pct;
    for (std::size_t l = 0; l < c.size(); ++l) pct[l] = 100.0 * std::abs(c[l]) / maxabs;
    return pct;
}

std::vector<double> rhs_eval(const RecoveredModel &model, std::span<const double> y) {
    if (static_cast<int>(y.size()) != model.basis.dimension)
        throw Error("rhs_eval: state dimension mismatch");
    for (double v : y)
        if (!std::isfinite(v)) throw Error("rhs_eval: non-finite state");
    std::vector<double> out(model.dimension(), 0.0);
    for (int k = 0; k < model.dimension(); ++k) {
        double s = 0.0;
        for (std::size_t l = 0; l < model.terms.size(); ++l)
            if (model.active[k][l]) s += model.coeffs[k][l] * eval_monomial(model.terms[l], y);
        out[k] = s;
    }
    return out;
}

namespace {

std::string generic_names(int n) {
    std::string s;
    for (int i = 0; i < n; ++i) {
        if (i) s += ",";
        s += "y" + std::to_string(i);
    }
    return s;
}

std::string monomial_text(const MultiIndex &index) {
    std::string s;
    for (int i = 0; i < index.dimension(); ++i) {
        if (index.exponents[i] == 0) continue;
        if (!s.empty()) s += " ";
        s += "y" + std::to_string(i) + "^" + std::to_string(index.exponents[i]);
    }
    return s;
}

} // namespace

std::string format_protocol(const LsqSolution &solution, const RecoveredModel &model,
                            int component) {
    if (component < 0 || component >= model.dimension())
        throw Error("format_protocol: component index out of range");

    std::ostringstream out;
    char buf[64];

    int tensor_total = 1;
    for (int i = 0; i < model.basis.dimension; ++i) tensor_total *= model.basis.max_degree + 1;
    std::snprintf(buf, sizeof(buf), "#total = %d   (max. deg. %d)\n", tensor_total,
                  model.basis.max_degree);
    out << buf;

    const auto pct = coefficient_percentages(model, component);
    for (std::size_t l = 0; l < model.terms.size(); ++l) {
        const auto code = combination_code(model.terms[l]);
        out << " [";
        for (int c : code) out << " " << c;
        out << " ] --> [";
        for (int i = 0; i < model.terms[l].dimension(); ++i) {
            if (i) out << ", ";
            out << model.terms[l].exponents[i];
        }
        std::snprintf(buf, sizeof(buf), "]%9.2f \n", pct[l]);
        out << buf;
    }

    std::snprintf(buf, sizeof(buf), "m = %2d monomial(s)%10.2f \n",
                  static_cast<int>(model.terms.size()), model.threshold_pct);
    out << buf;

    // recovered equation, three terms per line
    const std::string head = "f(" + generic_names(model.basis.dimension) + ") = ";
    out << head;
    int written = 0;
    for (std::size_t l = 0; l < model.terms.size(); ++l) {
        if (!model.active[component][l]) continue;
        if (written > 0 && written % 3 == 0) out << "\n" << std::string(head.size(), ' ');
        std::snprintf(buf, sizeof(buf), "+ (% .1e) ", model.coeffs[component][l]);
        out << buf;
        const std::string mono = monomial_text(model.terms[l]);
        if (!mono.empty()) out << mono << " ";
        ++written;
    }
    if (written == 0) out << "0 ";
    out << "\n";

    out << "LSQ: ||residual/sqrt(n)||_2 = "
        << format_full(solution.scaled_residuals.at(component)) << "\n";
    return out.str();
}

LsqSolution refit_active(const GramSystem &system, const RecoveredModel &model) {
    LsqSolution out;
    out.coeffs = model.coeffs;
    out.scaled_residuals.assign(model.dimension(), 0.0);
    const std::size_t m = system.a.rows();

    for (int k = 0; k < model.dimension(); ++k) {
        std::vector<std::size_t> cols;
        for (std::size_t l = 0; l < model.terms.size(); ++l)
            if (model.active[k][l]) cols.push_back(l);
        const auto &b = system.rhs.at(k);
        if (!cols.empty()) {
            Matrix sub(m, cols.size());
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = system.a(i, cols[j]);
            PivotedQr qr(sub);
            auto c = qr.solve(b);
            for (std::size_t j = 0; j < cols.size(); ++j) out.coeffs[k][cols[j]] = c[j];
        }
        std::vector<double> full(model.terms.size(), 0.0);
        for (std::size_t l = 0; l < model.terms.size(); ++l)
            if (model.active[k][l]) full[l] = out.coeffs[k][l];
        auto ac = matvec(system.a, full);
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += (ac[i] - b[i]) * (ac[i] - b[i]);
        out.scaled_residuals[k] = std::sqrt(s / static_cast<double>(m));
    }
    return out;
}

} // namespace odeid
