#include "tlao/two_particle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

#include "tlao/errors.hpp"
#include "tlao/fft.hpp"
#include "tlao/spectral.hpp"

namespace tlao {

namespace {

double unit_gaussian(double r, double w) {
    return std::exp(-0.5 * r * r / (w * w)) / (std::sqrt(2.0 * std::numbers::pi) * w);
}

std::vector<double> centers_at(double t, const TrajectorySpec& traj, const PerturbationSpec& pert) {
    const auto c = trap_centers(t, traj, pert);
    return {c.left, c.middle, c.right};
}

}  // namespace

void InteractionSpec::validate(const Grid1D& grid) const {
    if (!std::isfinite(g1d)) throw ConfigError("interaction.g1d must be finite");
    if (!(width >= 2.0 * grid.dx() - 1e-12))
        throw ConfigError("interaction.width " + std::to_string(width) + " is below two grid spacings (" +
                          std::to_string(2.0 * grid.dx()) + ")");
}

double onsite_interaction(const InteractionSpec& inter, const TrapParams& p, const Grid1D& grid) {
    const std::array<double, 1> c{0.0};
    const auto v = sample_potential(grid, c, p);
    const auto phi = ground_state(grid, v);
    const double dx = grid.dx();
    std::vector<double> rho(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) rho[i] = std::norm(phi.values[i]);
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i)
        for (std::size_t j = 0; j < grid.n; ++j)
            acc += rho[i] * rho[j] * unit_gaussian(grid.x(i) - grid.x(j), inter.width);
    return inter.g1d * acc * dx * dx;
}

InteractionSpec calibrated_interaction(double target_u, double width, const TrapParams& p, const Grid1D& grid) {
    InteractionSpec unit{1.0, width};
    unit.validate(grid);
    return {target_u / onsite_interaction(unit, p, grid), width};
}

double TwoBodyWavefunction::norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    return acc * grid.dx() * grid.dx();
}

double TwoBodyWavefunction::symmetry_residual() const {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
        for (std::size_t j = 0; j < grid.n; ++j) {
            scale = std::max(scale, std::abs(at(i, j)));
            if (j > i) diff = std::max(diff, std::abs(at(i, j) - at(j, i)));
        }
    }
    return scale > 0.0 ? diff / scale : 0.0;
}

std::vector<double> TwoBodyWavefunction::reduced_density() const {
    std::vector<double> out(grid.n, 0.0);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < grid.n; ++j) acc += std::norm(at(i, j));
        out[i] = 2.0 * acc * grid.dx();
    }
    return out;
}

TwoBodyWavefunction build_initial_hole_state(const Grid1D& grid, const TrajectorySpec& traj,
                                             const PerturbationSpec& pert, const TrapParams& p) {
    const auto basis = localized_basis_for(grid, centers_at(0.0, traj, pert), p, pert.gamma);
    const Eigen::VectorXd m = basis.orbitals.col(index(Site::Middle));
    const Eigen::VectorXd r = basis.orbitals.col(index(Site::Right));
    TwoBodyWavefunction psi{grid, std::vector<cplx>(grid.n * grid.n)};
    for (std::size_t i = 0; i < grid.n; ++i) {
        const auto a = static_cast<Eigen::Index>(i);
        for (std::size_t j = 0; j < grid.n; ++j) {
            const auto b = static_cast<Eigen::Index>(j);
            psi.at(i, j) = m(a) * r(b) + r(a) * m(b);
        }
    }
    const double s = 1.0 / std::sqrt(psi.norm());
    for (auto& v : psi.values) v *= s;
    return psi;
}

TrajectorySpec hole_transport_trajectory() {
    TrajectorySpec traj;
    for (auto* pair : {&traj.lm, &traj.mr}) {
        pair->d_max = 9.0;
        pair->d_min = 1.5;
        pair->t_r = 350.0;
        pair->t_i = 100.0;
    }
    traj.t_delay = 180.0;
    traj.order = PulseOrder::Counterintuitive;
    return traj;
}

void Numerics2P::validate() const {
    grid.validate();
    if (!(dt > 0.0)) throw ConfigError("numerics.dt must be positive");
    if (!(sample_interval >= 0.0)) throw ConfigError("numerics.sample_interval must be non-negative");
    if (!(norm_tolerance > 0.0) || !(symmetry_tolerance > 0.0))
        throw ConfigError("numerics tolerances must be positive");
}

HoleSample project_holes(const TwoBodyWavefunction& psi, double t, const TrajectorySpec& traj,
                         const PerturbationSpec& pert, const TrapParams& p) {
    const auto& grid = psi.grid;
    const std::size_t n = grid.n;
    const double dx = grid.dx();
    const auto basis = localized_basis_for(grid, centers_at(t, traj, pert), p, pert.gamma);

    // B(a, x2) = integral w_a(x1) psi(x1, x2) dx1
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(3, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index a = 0; a < 3; ++a) {
            const double w = basis.orbitals(static_cast<Eigen::Index>(i), a) * dx;
            if (w == 0.0) continue;
            const cplx* row = &psi.values[i * n];
            for (std::size_t j = 0; j < n; ++j) b(a, static_cast<Eigen::Index>(j)) += w * row[j];
        }
    }
    const Eigen::MatrixXcd amp = b * basis.orbitals.cast<cplx>() * dx;  // A(a, b) = <w_a w_b|psi>

    HoleSample s;
    s.t = t;
    for (Eigen::Index a = 0; a < 3; ++a) {
        const double occ = 2.0 * b.row(a).squaredNorm() * dx;
        s.holes[static_cast<std::size_t>(a)] = 1.0 - occ;
        s.particle_number += occ;
    }
    s.hole_fidelity = 2.0 * std::norm(amp(index(Site::Left), index(Site::Middle)));
    return s;
}

PropagationStats propagate2(TwoBodyWavefunction& psi, const TrajectorySpec& traj, const PerturbationSpec& pert,
                            const InteractionSpec& inter, const TrapParams& p, double t0, double t1,
                            double dt, const Observer2P& observe, double observe_interval,
                            double norm_tolerance, double symmetry_tolerance, double* max_symmetry_residual) {
    if (!(dt > 0.0)) throw ConfigError("propagate2: dt must be positive");
    const Grid1D& grid = psi.grid;
    inter.validate(grid);
    const std::size_t n = grid.n;
    PropagationStats stats;
    stats.t_end = t1;
    const double norm0 = psi.norm();
    double worst_symmetry = 0.0;
    if (observe) observe(t0, psi);
    if (!(t1 > t0)) return stats;

    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
    const double h = (t1 - t0) / double(steps);
    const std::size_t stride =
        observe_interval > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(observe_interval / h)))
                               : steps;

    FftPlan fft(n, n);
    const auto k = grid.wavenumbers();
    const double inv = 1.0 / double(n * n);
    std::vector<cplx> kin1(n), kin_half(n);
    for (std::size_t i = 0; i < n; ++i) kin1[i] = std::polar(1.0, -0.5 * k[i] * k[i] * h);
    // exp(-i (k1^2 + k2^2) h / 2) factorises; the 1/n^2 normalisation rides on the row factor.
    for (std::size_t i = 0; i < n; ++i) kin_half[i] = kin1[i] * inv;

    std::vector<cplx> interaction(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            interaction[i * n + j] =
                std::polar(1.0, -0.5 * h * inter.g1d * unit_gaussian(grid.x(i) - grid.x(j), inter.width));

    const auto xs = grid.points();
    std::vector<double> v(n);
    std::vector<cplx> e1(n);

    auto check = [&](double t) {
        const double drift = std::abs(psi.norm() - norm0);
        stats.max_norm_drift = std::max(stats.max_norm_drift, drift);
        const double asym = psi.symmetry_residual();
        worst_symmetry = std::max(worst_symmetry, asym);
        if (!(drift <= norm_tolerance))
            throw NumericalIntegrityError("two-body norm drift " + std::to_string(drift) + " at t = " +
                                          std::to_string(t));
        if (!(asym <= symmetry_tolerance))
            throw NumericalIntegrityError("exchange symmetry residual " + std::to_string(asym) + " at t = " +
                                          std::to_string(t));
    };

    auto apply_potential = [&]() {
        for (std::size_t i = 0; i < n; ++i) {
            cplx* row = &psi.values[i * n];
            const cplx* vint = &interaction[i * n];
            for (std::size_t j = 0; j < n; ++j) row[j] *= e1[i] * e1[j] * vint[j];
        }
    };

    for (std::size_t s = 0; s < steps; ++s) {
        const double tm = t0 + (double(s) + 0.5) * h;
        sample_potential(xs, centers_at(tm, traj, pert), p, pert.gamma, v);
        for (std::size_t i = 0; i < n; ++i) e1[i] = std::polar(1.0, -0.5 * v[i] * h);
        apply_potential();
        fft.forward(psi.values);
        for (std::size_t i = 0; i < n; ++i) {
            cplx* row = &psi.values[i * n];
            const cplx ki = kin_half[i];
            for (std::size_t j = 0; j < n; ++j) row[j] *= ki * kin1[j];
        }
        fft.backward(psi.values);
        apply_potential();
        ++stats.steps;
        const bool last = s + 1 == steps;
        if ((s + 1) % 512 == 0 || last) check(t0 + double(s + 1) * h);
        if (observe && ((s + 1) % stride == 0 || last)) observe(last ? t1 : t0 + double(s + 1) * h, psi);
    }
    if (max_symmetry_residual) *max_symmetry_residual = std::max(*max_symmetry_residual, worst_symmetry);
    return stats;
}

HoleResult run_hole_stirap(const TrajectorySpec& traj, const PerturbationSpec& pert, const InteractionSpec& inter,
                           const TrapParams& p, const Numerics2P& num) {
    traj.validate();
    pert.validate();
    p.validate();
    num.validate();
    inter.validate(num.grid);

    HoleResult result;
    TwoBodyWavefunction psi = build_initial_hole_state(num.grid, traj, pert, p);
    const double t_end = traj.duration();
    double interval = num.sample_interval;
    if (num.snapshot && num.snapshot_interval > 0.0)
        interval = interval > 0.0 ? std::min(interval, num.snapshot_interval) : num.snapshot_interval;
    double next_sample = 0.0, next_snapshot = 0.0;
    const double eps = 1e-6;
    Observer2P observer = [&](double t, const TwoBodyWavefunction& state) {
        const bool at_end = std::abs(t - t_end) < eps;
        if (num.snapshot && num.snapshot_interval > 0.0 && (t + eps >= next_snapshot || at_end)) {
            num.snapshot(t, state);
            next_snapshot += num.snapshot_interval;
        }
        if (num.sample_interval > 0.0 && t + eps >= next_sample && !at_end) {
            result.history.push_back(project_holes(state, t, traj, pert, p));
            next_sample += num.sample_interval;
        }
    };
    result.max_symmetry_residual = psi.symmetry_residual();
    const auto stats = propagate2(psi, traj, pert, inter, p, 0.0, t_end, num.dt,
                                  interval > 0.0 ? observer : Observer2P{}, interval, num.norm_tolerance,
                                  num.symmetry_tolerance, &result.max_symmetry_residual);
    result.max_norm_drift = stats.max_norm_drift;
    const auto last = project_holes(psi, t_end, traj, pert, p);
    result.history.push_back(last);
    result.final_holes = last.holes;
    result.hole_fidelity = last.hole_fidelity;
    result.final_state = std::move(psi);
    return result;
}

void write_csv(std::ostream& os, const HoleResult& result) {
    os << "t,h_L,h_M,h_R\n" << std::setprecision(12);
    for (const auto& s : result.history) os << s.t << ',' << s.holes[0] << ',' << s.holes[1] << ',' << s.holes[2] << '\n';
}

}  // namespace tlao
