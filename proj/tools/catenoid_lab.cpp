#include <cmath>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catenoid_ac/catenoid_ac.hpp"

namespace ac = catenoid_ac;

namespace {

void cmd_constants(int k, int N) {
    [[maybe_unused]] const ac::CatenoidParams p(N);  // validates N
    if (k < 1) throw ac::ArgumentError("constants: k must be >= 1");
    const double beta = ac::compute_beta();
    std::cout << "beta," << ac::format_double(beta) << '\n';
    if (k >= 2) {
        const auto b = ac::b_constants(k, beta);
        for (std::size_t l = 0; l < b.size(); ++l) {
            std::cout << "b_" << l + 1 << ',' << ac::format_double(b[l]) << '\n';
        }
    }
    const auto gamma = ac::gamma_constants(k, beta);
    for (std::size_t j = 0; j < gamma.size(); ++j) {
        std::cout << "gamma_" << j + 1 << ',' << ac::format_double(gamma[j]) << '\n';
    }
}

void cmd_eta(double t_end, const std::string& out) {
    const auto sol = ac::solve_eta(t_end);
    std::vector<ac::CsvRow> rows;
    rows.reserve(sol.times().size());
    for (std::size_t i = 0; i < sol.times().size(); ++i) {
        rows.push_back({sol.times()[i], sol.eta()[i], sol.eta_prime()[i]});
    }
    ac::write_csv(out, {"t", "eta", "eta_prime"}, rows);
}

void cmd_toda(int k, int N, double t0, double t_end, const std::string& out) {
    const ac::CatenoidParams p(N);
    auto eta = std::make_shared<const ac::EtaSolution>(ac::solve_eta(t0));
    const ac::LeadingOrder model(k, p, eta);
    const auto traj = ac::solve_toda(t0, t_end, model.rho(t0), model);
    std::vector<std::string> header{"t"};
    for (int j = 1; j <= k; ++j) header.push_back("rho_" + std::to_string(j));
    for (int j = 1; j <= k; ++j) header.push_back("h_" + std::to_string(j));
    std::vector<ac::CsvRow> rows;
    rows.reserve(traj.samples());
    for (std::size_t m = 0; m < traj.samples(); ++m) {
        ac::CsvRow row{traj.times()[m]};
        for (int j = 0; j < k; ++j) row.push_back(traj.rho()[j][m]);
        for (int j = 0; j < k; ++j) row.push_back(traj.h()[j][m]);
        rows.push_back(std::move(row));
    }
    ac::write_csv(out, header, rows);
}

void cmd_simulate(const std::string& config_path) {
    const auto cfg = ac::load_run_config(config_path);
    const auto res = ac::run_experiment(cfg);
    std::cout << "snapshots," << res.track.samples() << '\n'
              << "max_deviation," << ac::format_double(res.track.max_deviation()) << '\n';
}

void cmd_error_check(int k, int N, double sigma, const std::vector<double>& times, const std::string& out) {
    const ac::CatenoidParams p(N);
    double t_min = -2.0;
    for (double t : times) t_min = std::min(t_min, t);
    auto eta = std::make_shared<const ac::EtaSolution>(ac::solve_eta(t_min));
    const ac::LeadingOrder model(k, p, eta);
    const auto samples = ac::error_bound_ratio(times, sigma, model);
    std::vector<ac::CsvRow> rows;
    for (const auto& s : samples) rows.push_back({s.t, s.sup_E_over_phi, s.ratio});
    ac::write_csv(out, {"t", "sup_E_over_phi", "ratio"}, rows);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-layer Allen-Cahn solutions on the catenoid"};
    app.require_subcommand(1);

    int k = 2, N = 2;
    double t0 = -1e4, t_end = -1e3, sigma = 1.0;
    std::string out, config;
    std::vector<double> times;

    auto* constants = app.add_subcommand("constants", "print beta, b_l and gamma_j");
    constants->add_option("--k", k, "number of layers")->required();
    constants->add_option("--N", N, "catenoid dimension")->required();

    auto* eta = app.add_subcommand("eta", "solve the eta ODE backward from t = -1");
    eta->add_option("--t-end", t_end, "final (most negative) time")->required();
    eta->add_option("--out", out, "output CSV")->required();

    auto* toda = app.add_subcommand("toda", "integrate the Toda system from rho^0(t0)");
    toda->add_option("--k", k)->required();
    toda->add_option("--N", N)->required();
    toda->add_option("--t0", t0)->required();
    toda->add_option("--t-end", t_end)->required();
    toda->add_option("--out", out)->required();

    auto* simulate = app.add_subcommand("simulate", "full PDE run from a config file");
    simulate->add_option("--config", config, "key=value config file")->required()->check(CLI::ExistingFile);

    auto* error_check = app.add_subcommand("error-check", "sup |E|/Phi at selected times");
    error_check->add_option("--k", k)->required();
    error_check->add_option("--N", N)->required();
    error_check->add_option("--sigma", sigma)->required();
    error_check->add_option("--t", times, "comma separated times")->required()->delimiter(',');
    error_check->add_option("--out", out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*constants) cmd_constants(k, N);
        else if (*eta) cmd_eta(t_end, out);
        else if (*toda) cmd_toda(k, N, t0, t_end, out);
        else if (*simulate) cmd_simulate(config);
        else if (*error_check) cmd_error_check(k, N, sigma, times, out);
    } catch (const ac::ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const ac::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
