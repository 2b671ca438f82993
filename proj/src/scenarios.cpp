#include "tlao/scenarios.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tlao/errors.hpp"
#include "tlao/snapshot.hpp"
#include "tlao/spectral.hpp"

namespace tlao {

namespace {

std::string format(const char* fmt, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
    return buf;
}

std::filesystem::path snapshot_file(const std::filesystem::path& dir, std::size_t index) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.bin", index);
    return dir / name;
}

void populations_metrics(ScenarioOutput& out, const RunResult& r) {
    out.metrics["rho_L"] = r.final_populations[0];
    out.metrics["rho_M"] = r.final_populations[1];
    out.metrics["rho_R"] = r.final_populations[2];
    out.metrics["excited_fraction"] = r.excited_fraction;
    out.metrics["coherence"] = r.coherence;
    out.metrics["norm_drift"] = r.max_norm_drift;
}

ScenarioOutput run_eig(const RunConfig& cfg) {
    const Grid1D& grid = cfg.numerics_1d.grid;
    const auto c = trap_centers(cfg.eig.time, cfg.trajectory, cfg.perturbation).as_array();
    const auto v = sample_potential(grid, c, cfg.trap, cfg.perturbation.gamma);
    const auto spectrum = stationary_states(grid, v, cfg.eig.count, cfg.eig.discretization);
    const auto basis = localized_basis_for(grid, c, cfg.trap, cfg.perturbation.gamma);
    auto schedule = std::make_shared<CouplingSchedule>(
        coupling_schedule(cfg.trajectory, cfg.perturbation, cfg.trap, cfg.eig.samples, grid));

    ScenarioOutput out;
    for (Eigen::Index i = 0; i < spectrum.energies.size(); ++i)
        out.metrics["E_" + std::to_string(i)] = spectrum.energies(i);
    out.metrics["J_LM"] = basis.coupling(0, 1);
    out.metrics["J_MR"] = basis.coupling(1, 2);
    out.metrics["J_LR"] = basis.coupling(0, 2);
    out.metrics["mu_L"] = basis.onsite(0);
    out.metrics["mu_M"] = basis.onsite(1);
    out.metrics["mu_R"] = basis.onsite(2);
    out.write_csv = [schedule](std::ostream& os) { write_csv(os, *schedule); };
    std::ostringstream s;
    s << std::setprecision(10) << "t=" << cfg.eig.time << " energies:";
    for (Eigen::Index i = 0; i < spectrum.energies.size(); ++i) s << ' ' << spectrum.energies(i);
    s << " J_LM=" << basis.coupling(0, 1) << " J_MR=" << basis.coupling(1, 2);
    out.summary = s.str();
    return out;
}

Numerics1D with_snapshots(const RunConfig& cfg, const std::filesystem::path& dir) {
    Numerics1D num = cfg.numerics_1d;
    if (cfg.output.snapshots && !dir.empty() && num.snapshot_interval > 0.0) {
        std::filesystem::create_directories(dir);
        auto counter = std::make_shared<std::size_t>(0);
        num.snapshot = [dir, counter](double t, const Wavefunction1D& psi) {
            const std::array<Grid1D, 1> axes{psi.grid};
            write_snapshot(snapshot_file(dir, (*counter)++), axes, t, psi.values);
        };
    }
    return num;
}

ScenarioOutput run_transport(const RunConfig& cfg, const std::filesystem::path& dir) {
    const Numerics1D num = with_snapshots(cfg, dir);
    auto result = std::make_shared<RunResult>();
    ScenarioOutput out;
    if (cfg.scenario == Scenario::Stirap) {
        *result = run_stirap(cfg.trajectory, cfg.perturbation, cfg.trap, num);
    } else if (cfg.scenario == Scenario::Cpt) {
        *result = run_cpt(cfg.trajectory, cfg.perturbation, cfg.trap, num);
    } else {
        PairSchedule pair = cfg.trajectory.lm;
        if (cfg.rabi.calibrate_hold) pair.t_i = calibrate_rabi_hold(pair, cfg.trajectory.ramp, cfg.trap, cfg.numerics_1d);
        *result = run_rabi(pair, cfg.trajectory.ramp, cfg.perturbation, cfg.trap, num);
        out.metrics["t_i"] = pair.t_i;
    }
    populations_metrics(out, *result);
    out.write_csv = [result](std::ostream& os) { write_csv(os, *result); };
    out.summary = format("rho_L=%.6f rho_M=%.6f rho_R=%.6f excited=%.2e", result->final_populations[0],
                         result->final_populations[1], result->final_populations[2], result->excited_fraction);
    if (cfg.scenario == Scenario::Rabi) out.summary += format(" t_i=%.4f", out.metrics["t_i"]);
    return out;
}

ScenarioOutput run_two_atom(const RunConfig& cfg, const std::filesystem::path& dir) {
    Numerics2P num = cfg.numerics_2p;
    InteractionSpec inter = cfg.interaction;
    if (cfg.target_u) inter = calibrated_interaction(*cfg.target_u, inter.width, cfg.trap, num.grid);
    if (cfg.output.snapshots && !dir.empty() && num.snapshot_interval > 0.0) {
        std::filesystem::create_directories(dir);
        auto counter = std::make_shared<std::size_t>(0);
        num.snapshot = [dir, counter](double t, const TwoBodyWavefunction& psi) {
            const std::array<Grid1D, 2> axes{psi.grid, psi.grid};
            write_snapshot(snapshot_file(dir, (*counter)++), axes, t, psi.values);
        };
    }
    auto result = std::make_shared<HoleResult>(run_hole_stirap(cfg.trajectory, cfg.perturbation, inter, cfg.trap, num));
    ScenarioOutput out;
    out.metrics["h_L"] = result->final_holes[0];
    out.metrics["h_M"] = result->final_holes[1];
    out.metrics["h_R"] = result->final_holes[2];
    out.metrics["hole_fidelity"] = result->hole_fidelity;
    out.metrics["particle_number"] = result->history.back().particle_number;
    out.metrics["symmetry_residual"] = result->max_symmetry_residual;
    out.metrics["norm_drift"] = result->max_norm_drift;
    out.metrics["g1d"] = inter.g1d;
    out.write_csv = [result](std::ostream& os) { write_csv(os, *result); };
    out.summary = format("h_L=%.6f h_M=%.6f h_R=%.6f hole_fidelity=%.6f", result->final_holes[0], result->final_holes[1],
                         result->final_holes[2], result->hole_fidelity) +
                  format(" g1d=%.6f", inter.g1d);
    return out;
}

ScenarioOutput run_guides(const RunConfig& cfg, const std::filesystem::path& dir) {
    Numerics2D num = cfg.numerics_2d;
    WaveguideResult r;
    if (cfg.scenario == Scenario::Waveguide) {
        if (cfg.output.snapshots && !dir.empty() && num.snapshot_interval > 0.0) {
            std::filesystem::create_directories(dir);
            auto counter = std::make_shared<std::size_t>(0);
            const std::array<Grid1D, 2> axes{num.y, num.x};
            num.snapshot = [dir, counter, axes](double t, std::span<const cplx> field) {
                write_snapshot(snapshot_file(dir, (*counter)++), axes, t, field);
            };
        }
        r = propagate_2d(cfg.geometry, cfg.packet, cfg.trap, num);
    } else {
        const auto tables = mode_decomposition(cfg.geometry, cfg.trap, num.x, num.y);
        r = propagate_channels(tables, cfg.geometry, cfg.packet, num);
    }
    ScenarioOutput out;
    out.metrics["f_L"] = r.exits.f_L;
    out.metrics["f_M"] = r.exits.f_M;
    out.metrics["f_R"] = r.exits.f_R;
    out.metrics["f_reflected"] = r.exits.f_reflected;
    out.metrics["deviation"] = std::abs(r.exits.f_L - r.exits.f_R);
    out.metrics["remaining"] = r.remaining;
    out.metrics["norm_drift"] = r.max_norm_drift;
    const double k_mean = cfg.packet.k_mean;
    const ExitFractions f = r.exits;
    out.write_csv = [k_mean, f](std::ostream& os) { write_exit_csv(os, {{k_mean, f}}); };
    out.summary = format("f_L=%.6f f_M=%.6f f_R=%.6f f_reflected=%.6f", f.f_L, f.f_M, f.f_R, f.f_reflected) +
                  format(" remaining=%.2e t_end=%.1f", r.remaining, r.t_end);
    return out;
}

}  // namespace

std::vector<std::string> scenario_metrics(Scenario s) {
    switch (s) {
        case Scenario::Eig: return {"E_0", "E_1", "E_2", "J_LM", "J_MR", "J_LR", "mu_L", "mu_M", "mu_R"};
        case Scenario::Stirap:
        case Scenario::Cpt: return {"rho_L", "rho_M", "rho_R", "excited_fraction", "coherence", "norm_drift"};
        case Scenario::Rabi: return {"rho_L", "rho_M", "rho_R", "excited_fraction", "coherence", "norm_drift", "t_i"};
        case Scenario::TwoAtom:
            return {"h_L", "h_M", "h_R", "hole_fidelity", "particle_number", "symmetry_residual", "norm_drift", "g1d"};
        case Scenario::Waveguide:
        case Scenario::Channels:
            return {"f_L", "f_M", "f_R", "f_reflected", "deviation", "remaining", "norm_drift"};
    }
    return {};
}

ScenarioOutput run_scenario(const RunConfig& cfg, const std::filesystem::path& snapshot_dir) {
    switch (cfg.scenario) {
        case Scenario::Eig: return run_eig(cfg);
        case Scenario::Stirap:
        case Scenario::Cpt:
        case Scenario::Rabi: return run_transport(cfg, snapshot_dir);
        case Scenario::TwoAtom: return run_two_atom(cfg, snapshot_dir);
        case Scenario::Waveguide:
        case Scenario::Channels: return run_guides(cfg, snapshot_dir);
    }
    throw ConfigError("unhandled scenario");
}

double run_metric(const RunConfig& cfg, const std::string& metric) {
    const auto names = scenario_metrics(cfg.scenario);
    if (std::find(names.begin(), names.end(), metric) == names.end())
        throw ConfigError("scenario '" + std::string(to_string(cfg.scenario)) + "' has no metric '" + metric + "'");
    const auto out = run_scenario(cfg);
    const auto it = out.metrics.find(metric);
    if (it == out.metrics.end())
        throw ConfigError("metric '" + metric + "' not produced by this configuration");
    return it->second;
}

}  // namespace tlao
