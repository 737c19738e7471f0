#include "odeid/pipeline.hpp"

#include <sstream>
#include <string>
#include <utility>

namespace odeid {

namespace {

template <class Fn>
auto run_stage(const char *stage, Fn &&fn) {
    try {
        return fn();
    } catch (const Error &) {
        throw;
    } catch (const std::exception &e) {
        throw Error(std::string("[") + stage + "] " + e.what());
    }
}

} // namespace

ReconstructionResult reconstruct(const Dataset &dataset, const RunConfig &config) {
    if (config.cheb_nodes < 1) throw Error("[config] cheb_nodes must be positive");
    if (config.cheb_truncation < 1 || config.cheb_truncation > config.cheb_nodes)
        throw Error("[config] cheb_truncation must lie in [1, cheb_nodes]");
    if (config.solve_grid < 2) throw Error("[config] solve_grid must be at least 2");
    if (config.threshold_pct < 0.0 || config.threshold_pct > 100.0)
        throw Error("[config] threshold_pct outside [0, 100]");

    const double t0 = dataset.window_start();
    const double t1 = dataset.window_end();
    if (!(t0 < t1)) throw Error("[window] components have no overlapping time window");

    const int n = static_cast<int>(dataset.components.size());

    ReconstructionResult result;
    std::vector<std::string> names;
    for (const auto &c : dataset.components) names.push_back(c.name);

    // per-component fit on the shared window; the Chebyshev nodes are always
    // interior, so asynchronous grids need no clipping
    std::vector<ChebSeries> full;
    for (const auto &c : dataset.components) {
        full.push_back(run_stage("fit", [&] {
            return fit_chebyshev(c, config.cheb_nodes, t0, t1);
        }));
    }

    for (const auto &series : full) {
        if (config.truncate_before_derivative) {
            auto state = run_stage("truncate", [&] { return truncate(series, config.cheb_truncation); });
            auto deriv = run_stage("derivative", [&] { return derivative(state); });
            result.state_series.push_back(std::move(state));
            result.derivative_series.push_back(std::move(deriv));
        } else {
            auto deriv_full = run_stage("derivative", [&] { return derivative(series); });
            result.state_series.push_back(
                run_stage("truncate", [&] { return truncate(series, config.cheb_truncation); }));
            result.derivative_series.push_back(
                run_stage("truncate", [&] { return truncate(deriv_full, config.cheb_truncation); }));
        }
    }

    MonomialBasis basis(n, config.max_degree, config.include_constant);
    auto system = run_stage("assemble", [&] {
        return assemble(result.state_series, result.derivative_series, basis, config.solve_grid);
    });
    result.solution = run_stage("solve", [&] { return solve(system); });

    result.model = run_stage("threshold", [&] {
        return threshold(result.solution, basis, config.threshold_pct, t0, t1, names);
    });

    if (config.refit_active_terms) {
        result.solution = run_stage("refit", [&] { return refit_active(system, result.model); });
        result.model.coeffs = result.solution.coeffs;
    }

    std::ostringstream protocol;
    for (int k = 0; k < n; ++k) {
        protocol << "Runtime protocol for y" << k << " = " << names[k] << " component.\n";
        protocol << run_stage("format", [&] { return format_protocol(result.solution, result.model, k); });
        if (k + 1 < n) protocol << "\n";
    }
    result.protocol_text = protocol.str();
    return result;
}

} // namespace odeid
