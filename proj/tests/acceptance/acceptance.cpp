// One PASS/FAIL line per acceptance criterion. Optional arguments select criteria
// by name substring, e.g. `acceptance stirap cpt`.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tlao/config.hpp"
#include "tlao/errors.hpp"
#include "tlao/scenarios.hpp"
#include "tlao/sweep.hpp"
#include "tlao/three_mode.hpp"

using namespace tlao;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0, double e = 0) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a, b, c, d, e);
    return buf;
}

json preset(const char* name) {
    json doc = read_json_file(preset_path(name, TLAO_PRESET_DIR));
    doc["scan"] = nullptr;
    if (doc.contains("output")) doc["output"]["snapshots"] = false;
    return doc;
}

double metric(const json& doc, const char* name) { return run_scenario(resolve_config(doc)).metrics.at(name); }

// The Fig. 1 run is shared by three criteria.
const RunResult& fig1_run() {
    static const RunResult r = [] {
        const auto cfg = resolve_config(preset("fig1"));
        return run_stirap(cfg.trajectory, cfg.perturbation, cfg.trap, cfg.numerics_1d);
    }();
    return r;
}

Outcome harmonic_spectrum() {
    const Grid1D g{-16.0, 16.0, 256};
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = 0.5 * g.x(i) * g.x(i);
    const auto s = stationary_states(g, v, 4, Discretization::FourierGrid);
    double worst = 0.0;
    for (Eigen::Index n = 0; n < 4; ++n) worst = std::max(worst, std::abs(s.energies(n) - (double(n) + 0.5)));
    return {worst <= 1e-4, fmt("max |E_n - (n+1/2)|, n<=3: %.2e (tol 1e-4)", worst)};
}

Outcome unitarity() {
    const Grid1D g = default_grid();
    const std::vector<double> c{0.0};
    const auto v = sample_potential(g, c, TrapParams{});
    Wavefunction1D psi{g, std::vector<cplx>(g.n)};
    for (std::size_t i = 0; i < g.n; ++i) psi.values[i] = std::polar(std::exp(-0.5 * std::pow(g.x(i) - 1.0, 2)), 0.7 * g.x(i));
    psi.normalize();
    const auto stats = propagate(
        psi, [&](double, std::span<double> out) { std::copy(v.begin(), v.end(), out.begin()); }, 0.0, 1000.0, 0.01,
        {}, 0.0, 1.0);
    const double per_step = stats.max_norm_drift / double(stats.steps);
    return {stats.steps == 100000 && per_step <= 1e-10,
            fmt("%.0f steps, total drift %.2e, per step %.2e (tol 1e-10)", double(stats.steps), stats.max_norm_drift,
                per_step)};
}

Outcome stirap_transfer() {
    const double rho = fig1_run().final_populations[2];
    json doc = preset("fig1");
    doc["trajectory"]["order"] = "intuitive";
    const double intuitive = metric(doc, "rho_R");
    return {rho >= 0.99 && intuitive <= 0.5,
            fmt("counterintuitive rho_R %.6f (>= 0.99), intuitive rho_R %.6f (<= 0.5)", rho, intuitive)};
}

Outcome robustness_plateau() {
    const auto cfg = resolve_config(read_json_file(preset_path("fig2a", TLAO_PRESET_DIR)));
    const auto r = run_scan(cfg.document, *cfg.scan, resolve_workers(0), metric_evaluator(cfg.scan->metric));
    std::size_t in = 0, good = 0;
    for (std::size_t i = 0; i < r.axis1.size(); ++i) {
        for (std::size_t j = 0; j < r.axis2.size(); ++j) {
            const double delay = r.axis1[i], dmin = r.axis2[j];
            if (delay < 60.0 || delay > 200.0 || dmin < 1.4 || dmin > 2.0) continue;
            ++in;
            if (r.at(i, j).status == CellStatus::Ok && r.at(i, j).value >= 0.95) ++good;
        }
    }
    const double frac = in ? double(good) / double(in) : 0.0;
    return {in > 0 && frac >= 0.6 && r.failures() == 0,
            fmt("%.0f of %.0f window cells reach rho_R >= 0.95 (%.3f, need 0.6); %.0f failed cells", double(good),
                double(in), frac, double(r.failures()))};
}

Outcome shaking() {
    json doc = preset("fig2b");
    const double a = 0.05 * doc["trajectory"]["d_min"].get<double>();
    ScanSpec spec;
    spec.axis1 = {"trajectory.t_delay", 60.0, 180.0, 7};
    spec.axis2 = ScanAxis{"perturbation.a_shake", -a, a, 2};
    spec.metric = "rho_R";
    const auto r = run_scan(resolve_config(doc).document, spec, resolve_workers(0), metric_evaluator("rho_R"));
    double best[2] = {0.0, 0.0}, at[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < r.axis1.size(); ++i)
        for (std::size_t j = 0; j < 2; ++j)
            if (r.at(i, j).status == CellStatus::Ok && r.at(i, j).value > best[j]) best[j] = r.at(i, j).value, at[j] = r.axis1[i];
    return {best[0] >= 0.9 && best[1] >= 0.9,
            fmt("a=%.3f: best rho_R %.4f at t_delay %.0f; a=-%.3f: best %.4f", a, best[1], at[1], a, best[0]) +
                fmt(" at t_delay %.0f (>= 0.9)", at[0])};
}

Outcome tilt_ordering() {
    const double gamma = 0.01;
    json s = preset("fig3c");
    s["perturbation"]["gamma"] = gamma;
    const double stirap = metric(s, "rho_R");
    s["trajectory"]["time_scale"] = 2.0;
    const double stirap_slow = metric(s, "rho_R");
    json slow = preset("fig3c-rabi-slow");
    slow["perturbation"]["gamma"] = gamma;
    json fast = preset("fig3c-rabi-fast");
    fast["perturbation"]["gamma"] = gamma;
    const double rabi_slow = metric(slow, "rho_R");
    const double rabi_fast = metric(fast, "rho_R");
    const bool ok = stirap > rabi_slow && rabi_fast > rabi_slow && stirap_slow >= stirap;
    return {ok, fmt("gamma=0.01: STIRAP(300) %.4f > Rabi(300,12) %.4f; Rabi(32,25) %.4f > Rabi(300,12); "
                    "STIRAP(600) %.6f >= STIRAP(300) %.6f",
                    stirap, rabi_slow, rabi_fast, stirap_slow, stirap)};
}

Outcome three_mode_vs_tdse() {
    const auto cfg = resolve_config(preset("fig1"));
    const auto schedule = coupling_schedule(cfg.trajectory, cfg.perturbation, cfg.trap, 721);
    const auto traj = propagate(ThreeModeState{}, schedule, 0.05);
    const double rho3 = traj.final_state().populations()[2];
    const double rho = fig1_run().final_populations[2];

    double worst = 0.0;
    for (const auto& s : schedule.samples) {
        if (s.J_LM == 0.0 && s.J_MR == 0.0) continue;
        const ThreeModeHamiltonian h{s.J_LM, s.J_MR, 0.0, 0.0};
        const Eigen::Vector3cd d = dark_state(mixing_angle(s.J_LM, s.J_MR)).vector();
        worst = std::max(worst, (h.matrix().cast<cplx>() * d).norm());
    }
    const double diff = std::abs(rho3 - rho);
    return {diff <= 0.05 && worst <= 1e-12,
            fmt("three-mode rho_R %.6f, TDSE %.6f, |diff| %.2e (tol 0.05); max |H D| %.1e (tol 1e-12)", rho3, rho,
                diff, worst)};
}

Outcome cpt_split() {
    json doc = preset("fig1");
    doc["scenario"] = "cpt";
    doc["trajectory"]["separation"] = "symmetric";
    const auto m = run_scenario(resolve_config(doc)).metrics;
    const double l = m.at("rho_L"), r = m.at("rho_R");
    return {std::abs(l - 0.5) <= 0.02 && std::abs(r - 0.5) <= 0.02,
            fmt("rho_L %.4f, rho_R %.4f (0.5 +- 0.02), coherence %.4f", l, r, m.at("coherence"))};
}

Outcome two_particle() {
    json doc = preset("fig4");
    const auto m = run_scenario(resolve_config(doc)).metrics;
    doc["interaction"]["g1d"] = 0.0;
    const auto m0 = run_scenario(resolve_config(doc)).metrics;
    const double sym = m.at("symmetry_residual"), h = m.at("h_R"), f = m.at("hole_fidelity");
    const double f0 = m0.at("hole_fidelity");
    const bool ok = sym <= 1e-8 && m0.at("symmetry_residual") <= 1e-8 && h >= 0.9 && f0 < f;
    return {ok, fmt("g1d=%.4f: h_R %.4f (>= 0.9), hole fidelity %.4f; g1d=0: h_R %.4f, hole fidelity %.4f",
                    m.at("g1d"), h, f, m0.at("h_R"), f0) +
                    fmt(" (strictly worse); symmetry residual %.1e (tol 1e-8)", std::max(sym, m0.at("symmetry_residual")))};
}

Outcome waveguide() {
    json doc = preset("fig5");
    const auto full = run_scenario(resolve_config(doc)).metrics;
    doc["scenario"] = "channels";
    std::vector<double> dev;
    std::map<std::string, double> ch;
    for (double k : {2.5, 3.5, 5.0}) {
        doc["packet"]["k_mean"] = k;
        const auto m = run_scenario(resolve_config(doc)).metrics;
        dev.push_back(m.at("deviation"));
        if (k == 3.5) ch = m;
    }
    const double fl = full.at("f_L"), fr = full.at("f_R"), refl = full.at("f_reflected");
    const double agree = std::max(std::abs(fl - ch.at("f_L")), std::abs(fr - ch.at("f_R")));
    const bool split = std::abs(fl - 0.5) <= 0.1 && std::abs(fr - 0.5) <= 0.1 && refl <= 0.01;
    const bool monotone = dev[0] < dev[1] && dev[1] < dev[2];
    return {split && monotone && agree <= 0.1,
            fmt("2D f_L %.4f f_R %.4f (0.5 +- 0.1) reflected %.1e (<= 0.01); ", fl, fr, refl) +
                fmt("channel |f_L-f_R| at k=2.5,3.5,5: %.4f %.4f %.4f (increasing); ", dev[0], dev[1], dev[2]) +
                fmt("channels vs 2D %.4f (tol 0.1)", agree)};
}

Outcome crank_nicolson() {
    const auto cfg = resolve_config(preset("fig1"));
    const Grid1D& g = cfg.numerics_1d.grid;
    const auto& traj = cfg.trajectory;
    const auto c0 = trap_centers(0.0, traj, cfg.perturbation).as_array();
    const auto basis0 = localized_basis_for(g, c0, cfg.trap);
    std::vector<cplx> psi(g.n);
    for (std::size_t i = 0; i < g.n; ++i) psi[i] = basis0.orbitals(Eigen::Index(i), 0);
    const double t_end = traj.duration();
    double cached_t = -1.0;
    std::array<double, 3> c{};
    oracle::crank_nicolson(
        psi, g.x_min, g.dx(),
        [&](double t, double x) {
            if (t != cached_t) c = trap_centers(t, traj, cfg.perturbation).as_array(), cached_t = t;
            return composite_potential(x, c, cfg.trap, cfg.perturbation.gamma);
        },
        0.0, t_end, cfg.numerics_1d.dt, cfg.trap.depth);
    const auto c1 = trap_centers(t_end, traj, cfg.perturbation).as_array();
    const auto basis1 = localized_basis_for(g, c1, cfg.trap);
    cplx amp = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) amp += basis1.orbitals(Eigen::Index(i), 2) * psi[i];
    const double rho_cn = std::norm(amp * g.dx());
    const double rho = fig1_run().final_populations[2];
    const double diff = std::abs(rho_cn - rho);
    return {diff <= 1e-4, fmt("split-step rho_R %.7f, Crank-Nicolson %.7f, |diff| %.2e (tol 1e-4)", rho, rho_cn, diff)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"stationary-spectrum", harmonic_spectrum},
        {"split-step-unitarity", unitarity},
        {"stirap-transfer", stirap_transfer},
        {"robustness-plateau", robustness_plateau},
        {"shaking-robustness", shaking},
        {"tilt-ordering", tilt_ordering},
        {"three-mode-vs-tdse", three_mode_vs_tdse},
        {"cpt-split", cpt_split},
        {"two-particle-hole", two_particle},
        {"waveguide-cpt", waveguide},
        {"crank-nicolson-oracle", crank_nicolson},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        if (argc > 1) {
            bool selected = false;
            for (int i = 1; i < argc; ++i) selected = selected || std::string(name).find(argv[i]) != std::string::npos;
            if (!selected) continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %-22s %s [%.0fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
