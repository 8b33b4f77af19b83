#pragma once

// Full PDE run from the leading-order ansatz with interface tracking against the Toda
// prediction.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "catenoid_ac/config.hpp"
#include "catenoid_ac/csv.hpp"
#include "catenoid_ac/errors.hpp"
#include "catenoid_ac/geometry.hpp"
#include "catenoid_ac/grid.hpp"
#include "catenoid_ac/interfaces.hpp"
#include "catenoid_ac/pde_solver.hpp"
#include "catenoid_ac/profiles.hpp"
#include "catenoid_ac/reduced_dynamics.hpp"

namespace catenoid_ac {

struct ExperimentResult {
    RunConfig config;  // with t_end, y_max and dt resolved
    InterfaceTrack track;
    double beta = 0.0;
    double far_field_gap = 0.0;  // r(y_max) - rho_k(t0)
    std::size_t steps = 0;
};

namespace detail {

inline std::vector<std::string> track_header(int k) {
    std::vector<std::string> h{"t"};
    for (int j = 1; j <= k; ++j) h.push_back("pos_" + std::to_string(j));
    for (int j = 1; j <= k; ++j) h.push_back("toda_" + std::to_string(j));
    return h;
}

inline void write_manifest(const std::string& path, const ExperimentResult& res, const LeadingOrder& model,
                           const std::string& status) {
    auto os = open_output(path);
    const auto& c = res.config;
    os << "status=" << status << '\n';
    os << "N=" << c.N << '\n';
    os << "k=" << c.k << '\n';
    os << "t0=" << format_double(c.t0) << '\n';
    os << "t_end=" << format_double(c.t_end) << '\n';
    os << "y_max=" << format_double(c.y_max) << '\n';
    os << "n=" << c.n << '\n';
    os << "dt=" << format_double(c.dt) << '\n';
    os << "theta=" << format_double(c.theta) << '\n';
    os << "sigma=" << format_double(c.sigma) << '\n';
    os << "snapshot_every=" << c.snapshot_every << '\n';
    os << "far_field_bc=" << to_string(c.far_field_bc) << '\n';
    os << "output_dir=" << c.output_dir << '\n';
    os << "reaction=heun\n";
    os << "beta=" << format_double(res.beta) << '\n';
    for (std::size_t l = 0; l < model.b().size(); ++l) {
        os << "b_" << l + 1 << '=' << format_double(model.b()[l]) << '\n';
    }
    for (std::size_t j = 0; j < model.gamma().size(); ++j) {
        os << "gamma_" << j + 1 << '=' << format_double(model.gamma()[j]) << '\n';
    }
    os << "eta_t0=" << format_double(model.eta().value(c.t0)) << '\n';
    os << "far_field_gap=" << format_double(res.far_field_gap) << '\n';
    // layer mass cut off by the Dirichlet node, 1 - |w(gap)|
    os << "far_field_tail=" << format_double(one_minus_w(res.far_field_gap)) << '\n';
    os << "steps=" << res.steps << '\n';
    os << "snapshots=" << res.track.samples() << '\n';
    os << "max_deviation=" << format_double(res.track.max_deviation()) << '\n';
}

}  // namespace detail

/// Runs the pipeline eta -> rho^0 -> Toda -> ansatz -> PDE and writes track.csv,
/// snapshots.csv and manifest.txt into cfg.output_dir. On failure the partial CSV files get
/// a '# failed: ...' marker row, the manifest records the failure and the error is rethrown.
inline ExperimentResult run_experiment(const RunConfig& cfg_in) {
    cfg_in.validate();
    ExperimentResult res;
    res.config = cfg_in;
    RunConfig& cfg = res.config;
    cfg.t_end = cfg.resolved_t_end();

    const CatenoidParams p(cfg.N);
    res.beta = compute_beta();
    auto eta = std::make_shared<const EtaSolution>(solve_eta(std::min(cfg.t0, -2.0), res.beta));
    const LeadingOrder model(cfg.k, p, eta);
    const auto rho_start = model.rho(cfg.t0);

    if (cfg.y_max == 0.0) cfg.y_max = y_of_r(rho_start.back() + 15.0, p);
    const Grid1D grid(cfg.y_max, cfg.n);
    res.far_field_gap = r_of_y(cfg.y_max, p) - rho_start.back();
    const LayerState L0(rho_start);
    const Field initial = initialize_from_ansatz(grid, cfg.t0, L0, p);
    if (cfg.dt == 0.0) cfg.dt = default_time_step(grid);

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.output_dir + "': " + ec.message());
    const auto dir = fs::path(cfg.output_dir);
    auto track_os = open_output((dir / "track.csv").string());
    auto snap_os = open_output((dir / "snapshots.csv").string());
    append_header(track_os, detail::track_header(cfg.k));
    append_header(snap_os, {"t", "y", "v"});

    res.track = InterfaceTrack(cfg.k);
    try {
        const auto toda = solve_toda(cfg.t0, cfg.t_end, rho_start, model);

        SolverConfig solver;
        solver.theta = cfg.theta;
        solver.dt = cfg.dt;
        if (cfg.far_field_bc == FarFieldBC::fixed_constant) {
            solver.far_field = FarField::fixed(L0.far_field_value());
        } else {
            const double r_max = r_of_y(cfg.y_max, p);
            solver.far_field = FarField::tracking([&toda, r_max, t_end = cfg.t_end](double t) {
                return ansatz_z(r_max, LayerState(toda.rho_at(std::min(t, t_end))));
            });
        }

        const auto nodes = grid.nodes();
        auto observer = [&](const Field& field) {
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                append_row(snap_os, {field.t, nodes[i], field.values[i]});
            }
            const auto pos = extract_interfaces(field, grid, p, cfg.k);
            const auto pred = toda.rho_at(field.t);
            res.track.push(field.t, pos, pred);
            CsvRow row{field.t};
            row.insert(row.end(), pos.begin(), pos.end());
            row.insert(row.end(), pred.begin(), pred.end());
            append_row(track_os, row);
        };
        const double span = cfg.t_end - cfg.t0;
        res.steps = static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));
        evolve(initial, cfg.t_end, solver, grid, p, observer, cfg.snapshot_every);
    } catch (const std::exception& e) {
        const std::string marker = std::string("# failed: ") + e.what() + '\n';
        track_os << marker;
        snap_os << marker;
        track_os.flush();
        snap_os.flush();
        detail::write_manifest((dir / "manifest.txt").string(), res, model, std::string("failed: ") + e.what());
        throw;
    }
    track_os.flush();
    snap_os.flush();
    if (!track_os || !snap_os) throw IoError("writing experiment output failed");
    detail::write_manifest((dir / "manifest.txt").string(), res, model, "ok");
    return res;
}

}  // namespace catenoid_ac
