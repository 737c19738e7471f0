// odeid - reconstruction of polynomial ODE right-hand sides from sampled
// trajectory data: Chebyshev approximation of the components, least-squares
// coefficient fit over a monomial family, thresholded model extraction,
// verification by re-integration, and damped Gauss-Newton refinement.

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "odeid/dataset.hpp"
#include "odeid/gauss_newton.hpp"
#include "odeid/integrate.hpp"
#include "odeid/model_io.hpp"
#include "odeid/numfmt.hpp"
#include "odeid/pipeline.hpp"

namespace {

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw odeid::Error("cannot write file: " + path.string());
    out << text;
}

void add_reconstruction_options(CLI::App *cmd, odeid::RunConfig &config) {
    cmd->add_option("--nodes", config.cheb_nodes, "Chebyshev node count of the fit")
        ->capture_default_str();
    cmd->add_option("--truncate", config.cheb_truncation,
                    "Coefficients kept for evaluation (11 suits rough data, 62 smooth data)")
        ->capture_default_str();
    cmd->add_option("--degree", config.max_degree, "Maximal total degree of the monomial family")
        ->capture_default_str();
    cmd->add_flag("--constant,!--no-constant", config.include_constant,
                  "Include the constant monomial term")
        ->capture_default_str();
    cmd->add_option("--grid", config.solve_grid, "Equidistant regression times")
        ->capture_default_str();
    cmd->add_option("--threshold", config.threshold_pct,
                    "Coefficient threshold in percent of the per-component maximum")
        ->capture_default_str();
    cmd->add_option("--rtol", config.rtol, "Integrator relative tolerance")->capture_default_str();
    cmd->add_option("--atol", config.atol, "Integrator absolute tolerance")->capture_default_str();
    cmd->add_flag("--truncate-first", config.truncate_before_derivative,
                  "Truncate before differentiating (default differentiates the full-order fit)");
    cmd->add_flag("--refit", config.refit_active_terms,
                  "Re-solve each component on its active terms after thresholding");
}

int run_gen_pendulum(const std::string &output, double damping, double length, double gravity,
                     double angle0, double velocity0, double t_end, int samples) {
    auto [angle, velocity] =
        odeid::generate_pendulum_data(damping, length, gravity, {angle0, velocity0}, t_end, samples);
    odeid::save_dataset_wide(output, {angle, velocity});
    std::cout << "wrote " << samples << " samples to " << output << "\n";
    return 0;
}

int run_approx(const std::string &input, const odeid::RunConfig &config, int eval_points,
               const std::string &output, const std::string &coeffs_out) {
    auto dataset = odeid::load_dataset(input);
    const double t0 = dataset.window_start();
    const double t1 = dataset.window_end();

    std::vector<std::string> header{"t"};
    std::vector<std::vector<double>> columns;
    std::vector<double> grid(eval_points);
    for (int i = 0; i < eval_points; ++i) grid[i] = t0 + (t1 - t0) * i / (eval_points - 1);
    grid.back() = t1;
    columns.push_back(grid);

    std::vector<odeid::ChebSeries> kept;
    for (const auto &component : dataset.components) {
        auto series = odeid::fit_chebyshev(component, config.cheb_nodes, t0, t1);
        auto state = odeid::truncate(series, config.cheb_truncation);
        auto slope = config.truncate_before_derivative
                         ? odeid::derivative(state)
                         : odeid::truncate(odeid::derivative(series), config.cheb_truncation);

        std::vector<double> sv(eval_points), dv(eval_points);
        for (int i = 0; i < eval_points; ++i) {
            sv[i] = odeid::evaluate(state, grid[i]);
            dv[i] = odeid::evaluate(slope, grid[i]);
        }
        header.push_back(component.name);
        columns.push_back(std::move(sv));
        header.push_back("d" + component.name);
        columns.push_back(std::move(dv));
        kept.push_back(std::move(state));
    }
    odeid::write_csv(output, header, columns);
    std::cout << "wrote approximation table to " << output << "\n";

    if (!coeffs_out.empty()) {
        std::ofstream out(coeffs_out, std::ios::binary);
        if (!out) throw odeid::Error("cannot write file: " + coeffs_out);
        out << "component,k,coefficient\n";
        for (std::size_t c = 0; c < kept.size(); ++c)
            for (std::size_t k = 0; k < kept[c].coeffs.size(); ++k)
                out << dataset.components[c].name << "," << k << ","
                    << odeid::format_full(kept[c].coeffs[k]) << "\n";
        std::cout << "wrote coefficients to " << coeffs_out << "\n";
    }
    return 0;
}

int run_reconstruct(const std::string &input, const odeid::RunConfig &config,
                    const std::string &report, const std::string &model_out) {
    auto dataset = odeid::load_dataset(input);
    auto result = odeid::reconstruct(dataset, config);
    std::cout << result.protocol_text;
    if (!report.empty()) write_text(report, result.protocol_text);
    odeid::save_model(model_out, result.model);
    std::cout << "model written to " << model_out << "\n";
    return 0;
}

int run_verify(const std::string &input, const std::string &model_path, const std::string &output,
               const std::string &report, double rtol, double atol, double rms_threshold) {
    auto dataset = odeid::load_dataset(input);
    auto model = odeid::load_model(model_path);
    auto verification = odeid::verify(model, dataset.components, rtol, atol);

    std::string text = odeid::format_verification_report(verification, dataset.components);
    std::cout << text;
    if (!report.empty()) write_text(report, text);

    if (!verification.integrable) {
        std::cerr << "error [verify]: model not integrable\n";
        return 3;
    }

    // comparison table over the union of sample times; blank data cells
    // where a component has no sample
    const auto &times = verification.trajectory.times;
    std::vector<std::string> header{"t"};
    std::vector<std::vector<double>> columns{times};
    const double nan = std::nan("");
    for (std::size_t k = 0; k < dataset.components.size(); ++k) {
        const auto &sig = dataset.components[k];
        std::vector<double> col(times.size(), nan);
        std::size_t j = 0;
        for (std::size_t i = 0; i < times.size() && j < sig.times.size(); ++i)
            if (times[i] == sig.times[j]) col[i] = sig.values[j++];
        header.push_back(sig.name);
        columns.push_back(std::move(col));
    }
    for (std::size_t k = 0; k < dataset.components.size(); ++k) {
        std::vector<double> col(times.size());
        for (std::size_t i = 0; i < times.size(); ++i)
            col[i] = verification.trajectory.states[i][k];
        header.push_back(dataset.components[k].name + "_model");
        columns.push_back(std::move(col));
    }
    odeid::write_csv(output, header, columns);
    std::cout << "comparison table written to " << output << "\n";

    if (rms_threshold > 0.0) {
        for (std::size_t k = 0; k < verification.rms.size(); ++k) {
            if (verification.rms[k] > rms_threshold) {
                std::cerr << "error [verify]: component " << dataset.components[k].name
                          << " rms " << odeid::format_full(verification.rms[k])
                          << " exceeds threshold " << odeid::format_full(rms_threshold) << "\n";
                return 4;
            }
        }
    }
    return 0;
}

int run_refine(const std::string &input, const std::string &model_path, const odeid::GnConfig &config,
               double rtol, double atol, const std::string &report, const std::string &model_out,
               const std::string &json_out) {
    auto dataset = odeid::load_dataset(input);
    odeid::FitProblem problem{odeid::load_model(model_path), dataset.components, rtol, atol};
    auto result = odeid::refine(problem, config);

    std::string text = odeid::format_refinement_report(result, config);
    std::cout << text;
    if (!report.empty()) write_text(report, text);
    if (!json_out.empty()) write_text(json_out, odeid::refinement_to_json(result));

    if (!result.converged) {
        std::cerr << "error [refine]: " << result.failure_reason << "\n";
        return 5;
    }
    if (!model_out.empty()) {
        odeid::save_model(model_out, odeid::apply_params(problem, result.params));
        std::cout << "refined model written to " << model_out << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Reconstruction of ODE right-hand sides from sampled trajectory data"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value configuration file (flag names as keys)");
    app.allow_config_extras(CLI::config_extras_mode::error);

    odeid::RunConfig config;

    // gen-pendulum
    auto *gen = app.add_subcommand("gen-pendulum", "Generate damped-pendulum sample data");
    double damping = 0.25, length = 2.0, gravity = 9.81, angle0 = 1.0, velocity0 = 0.0, t_end = 10.0;
    int samples = 49;
    std::string gen_out = "pendulum.csv";
    gen->add_option("--damping", damping, "Velocity damping coefficient")->capture_default_str();
    gen->add_option("--length", length, "Pendulum length")->capture_default_str();
    gen->add_option("--gravity", gravity, "Gravitational acceleration")->capture_default_str();
    gen->add_option("--theta1", angle0, "Initial angle")->capture_default_str();
    gen->add_option("--theta2", velocity0, "Initial angular velocity")->capture_default_str();
    gen->add_option("--t-end", t_end, "End of the sampling interval [0, t-end]")
        ->capture_default_str();
    gen->add_option("--samples", samples, "Number of equidistant samples")->capture_default_str();
    gen->add_option("-o,--output", gen_out, "Output CSV path")->capture_default_str();

    // approx
    auto *approx = app.add_subcommand("approx", "Fit and dump the Chebyshev approximations");
    std::string approx_in, approx_out = "approx.csv", coeffs_out;
    int eval_points = 200;
    approx->add_option("-i,--input", approx_in, "Dataset CSV (wide or long format)")->required();
    add_reconstruction_options(approx, config);
    approx->add_option("--eval-points", eval_points, "Evaluation grid size for the dump")
        ->capture_default_str();
    approx->add_option("-o,--output", approx_out, "Output CSV with values and derivatives")
        ->capture_default_str();
    approx->add_option("--coeffs-out", coeffs_out, "Optional CSV with the kept coefficients");

    // reconstruct
    auto *rec = app.add_subcommand("reconstruct", "Recover a polynomial right-hand side");
    std::string rec_in, rec_report, rec_model = "model.json";
    rec->add_option("-i,--input", rec_in, "Dataset CSV (wide or long format)")->required();
    add_reconstruction_options(rec, config);
    rec->add_option("--report", rec_report, "Write the runtime protocol to this file");
    rec->add_option("--model-out", rec_model, "Recovered model JSON path")->capture_default_str();

    // verify
    auto *ver = app.add_subcommand("verify", "Integrate a recovered model against the data");
    std::string ver_in, ver_model, ver_out = "verify.csv", ver_report;
    double ver_rtol = 1e-9, ver_atol = 1e-9, rms_threshold = 0.0;
    ver->add_option("-i,--input", ver_in, "Dataset CSV")->required();
    ver->add_option("-m,--model", ver_model, "Recovered model JSON")->required();
    ver->add_option("-o,--output", ver_out, "Comparison CSV (t, data..., model...)")
        ->capture_default_str();
    ver->add_option("--report", ver_report, "Write the verification report to this file");
    ver->add_option("--rtol", ver_rtol, "Integrator relative tolerance")->capture_default_str();
    ver->add_option("--atol", ver_atol, "Integrator absolute tolerance")->capture_default_str();
    ver->add_option("--rms-threshold", rms_threshold,
                    "Fail when any per-component rms exceeds this value (0 disables)")
        ->capture_default_str();

    // refine
    auto *ref = app.add_subcommand("refine", "Gauss-Newton refinement of the model coefficients");
    std::string ref_in, ref_model, ref_report, ref_model_out, ref_json;
    odeid::GnConfig gn;
    double ref_rtol = 1e-9, ref_atol = 1e-9;
    ref->add_option("-i,--input", ref_in, "Dataset CSV")->required();
    ref->add_option("-m,--model", ref_model, "Recovered model JSON")->required();
    ref->add_option("--ptol", gn.ptol, "Relative precision of the correction norm")
        ->capture_default_str();
    ref->add_option("--max-iter", gn.max_iter, "Maximum Gauss-Newton iterations")
        ->capture_default_str();
    ref->add_option("--fc-start", gn.fc_start, "Damping factor of the first step")
        ->capture_default_str();
    ref->add_option("--fc-min", gn.fc_min, "Smallest admissible damping factor")
        ->capture_default_str();
    ref->add_option("--fd-step", gn.fd_step, "Relative forward-difference step")
        ->capture_default_str();
    ref->add_option("--rtol", ref_rtol, "Integrator relative tolerance")->capture_default_str();
    ref->add_option("--atol", ref_atol, "Integrator absolute tolerance")->capture_default_str();
    ref->add_option("--report", ref_report, "Write the iteration report to this file");
    ref->add_option("--model-out", ref_model_out, "Write the refined model JSON here");
    ref->add_option("--json-out", ref_json, "Machine-readable result JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return run_gen_pendulum(gen_out, damping, length, gravity, angle0, velocity0, t_end,
                                    samples);
        if (approx->parsed())
            return run_approx(approx_in, config, eval_points, approx_out, coeffs_out);
        if (rec->parsed()) return run_reconstruct(rec_in, config, rec_report, rec_model);
        if (ver->parsed())
            return run_verify(ver_in, ver_model, ver_out, ver_report, ver_rtol, ver_atol,
                              rms_threshold);
        if (ref->parsed())
            return run_refine(ref_in, ref_model, gn, ref_rtol, ref_atol, ref_report, ref_model_out,
                              ref_json);
    } catch (const odeid::IntegrationError &e) {
        std::cerr << "error [integrate]: " << e.what() << "\n";
        return 3;
    } catch (const odeid::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
