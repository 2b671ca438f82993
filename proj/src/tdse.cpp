#include "tlao/tdse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include "tlao/errors.hpp"

namespace tlao {

double Wavefunction1D::norm() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    return acc * grid.dx();
}

void Wavefunction1D::normalize() {
    const double s = 1.0 / std::sqrt(norm());
    for (auto& v : values) v *= s;
}

cplx Wavefunction1D::overlap(const Eigen::VectorXd& f) const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += f(static_cast<Eigen::Index>(i)) * values[i];
    return acc * grid.dx();
}

SplitStep1D::SplitStep1D(const Grid1D& grid, double dt)
    : grid_(grid), dt_(dt), fft_(grid.n), kinetic_(grid.n), half_potential_(grid.n) {
    const auto k = grid.wavenumbers();
    const double inv_n = 1.0 / double(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) kinetic_[i] = std::polar(inv_n, -0.5 * k[i] * k[i] * dt);
}

void SplitStep1D::step(std::span<cplx> psi, std::span<const double> potential) {
    for (std::size_t i = 0; i < psi.size(); ++i) {
        half_potential_[i] = std::polar(1.0, -0.5 * potential[i] * dt_);
        psi[i] *= half_potential_[i];
    }
    fft_.forward(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= kinetic_[i];
    fft_.backward(psi);
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= half_potential_[i];
}

PropagationStats propagate(Wavefunction1D& psi, const PotentialSampler& potential, double t0, double t1,
                           double dt, const Observer1D& observe, double observe_interval,
                           double norm_tolerance) {
    if (!(dt > 0.0)) throw ConfigError("propagate: dt must be positive");
    PropagationStats stats;
    stats.t_end = t1;
    const double norm0 = psi.norm();
    if (observe) observe(t0, psi);
    if (!(t1 > t0)) return stats;

    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
    const double h = (t1 - t0) / double(steps);
    const std::size_t stride =
        observe_interval > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(observe_interval / h)))
                               : steps;
    SplitStep1D stepper(psi.grid, h);
    std::vector<double> v(psi.grid.n);

    auto check_norm = [&](double t) {
        const double drift = std::abs(psi.norm() - norm0);
        stats.max_norm_drift = std::max(stats.max_norm_drift, drift);
        if (!(drift <= norm_tolerance))
            throw NumericalIntegrityError("norm drift " + std::to_string(drift) + " at t = " + std::to_string(t) +
                                          " exceeds tolerance; reduce dt or enlarge the grid");
    };

    for (std::size_t s = 0; s < steps; ++s) {
        potential(t0 + (double(s) + 0.5) * h, v);
        stepper.step(psi.values, v);
        ++stats.steps;
        const bool last = s + 1 == steps;
        if ((s + 1) % 256 == 0 || last) check_norm(t0 + double(s + 1) * h);
        if (observe && ((s + 1) % stride == 0 || last)) observe(last ? t1 : t0 + double(s + 1) * h, psi);
    }
    return stats;
}

Wavefunction1D ground_state(const Grid1D& grid, std::span<const double> potential, double* energy_out) {
    const auto spectrum = stationary_states(grid, potential, 1);
    const Eigen::VectorXd phi = spectrum.states.col(0);
    const double e = spectrum.energies(0);
    const Eigen::VectorXd residual = apply_hamiltonian(grid, potential, phi) - e * phi;
    const double rel = residual.norm() / phi.norm();
    if (rel > 1e-8) throw NumericalIntegrityError("ground state residual " + std::to_string(rel) + " above 1e-8");

    Wavefunction1D psi{grid, std::vector<cplx>(grid.n)};
    // Fix the global sign so the state is positive where it peaks.
    Eigen::Index peak = 0;
    phi.cwiseAbs().maxCoeff(&peak);
    const double sign = phi(peak) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < grid.n; ++i) psi.values[i] = sign * phi(static_cast<Eigen::Index>(i));
    if (energy_out) *energy_out = e;
    return psi;
}

double energy(const Wavefunction1D& psi, std::span<const double> potential) {
    std::vector<cplx> work = psi.values;
    FftPlan fft(psi.grid.n);
    fft.forward(work);
    const auto k = psi.grid.wavenumbers();
    double kinetic = 0.0, weight = 0.0;
    for (std::size_t i = 0; i < work.size(); ++i) {
        kinetic += 0.5 * k[i] * k[i] * std::norm(work[i]);
        weight += std::norm(work[i]);
    }
    double pot = 0.0, mass = 0.0;
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
        pot += potential[i] * std::norm(psi.values[i]);
        mass += std::norm(psi.values[i]);
    }
    return kinetic / weight + pot / mass;
}

std::array<double, 2> position_moments(const Wavefunction1D& psi) {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
        const double w = std::norm(psi.values[i]);
        const double x = psi.grid.x(i);
        m0 += w;
        m1 += w * x;
        m2 += w * x * x;
    }
    const double mean = m1 / m0;
    return {mean, m2 / m0 - mean * mean};
}

void Numerics1D::validate() const {
    grid.validate();
    if (!(dt > 0.0)) throw ConfigError("numerics.dt must be positive");
    if (!(sample_interval >= 0.0)) throw ConfigError("numerics.sample_interval must be non-negative");
    if (!(norm_tolerance > 0.0)) throw ConfigError("numerics.norm_tolerance must be positive");
}

namespace {

using CenterFn = std::function<std::vector<double>(double)>;

struct Layout {
    CenterFn centers;
    double gamma = 0.0;
    double t_end = 0.0;
};

PopulationSample project(const Wavefunction1D& psi, double t, const Layout& layout, const TrapParams& p,
                         LocalizedBasis* basis_out = nullptr) {
    const auto c = layout.centers(t);
    const auto basis = localized_basis_for(psi.grid, c, p, layout.gamma);
    PopulationSample s;
    s.t = t;
    std::vector<double> rho(basis.size());
    for (std::size_t a = 0; a < basis.size(); ++a) rho[a] = std::norm(psi.overlap(basis.orbitals.col(static_cast<Eigen::Index>(a))));
    if (rho.size() == 3) {
        s.rho = {rho[0], rho[1], rho[2]};
    } else {
        s.rho = {rho.front(), 0.0, rho.back()};
    }
    s.excited = std::max(0.0, psi.norm() - std::accumulate(rho.begin(), rho.end(), 0.0));
    if (basis_out) *basis_out = basis;
    return s;
}

Wavefunction1D left_trap_ground_state(const Grid1D& grid, double center, const TrapParams& p, double gamma) {
    const std::array<double, 1> c{center};
    const auto v = sample_potential(grid, c, p, gamma);
    return ground_state(grid, v);
}

PropagationStats evolve(Wavefunction1D& psi, const Layout& layout, const TrapParams& p, double t0, double t1,
                        const Numerics1D& num, const Observer1D& observe, double interval) {
    const auto xs = num.grid.points();
    PotentialSampler sampler = [&](double t, std::span<double> out) {
        const auto c = layout.centers(t);
        sample_potential(xs, c, p, layout.gamma, out);
    };
    return propagate(psi, sampler, t0, t1, num.dt, observe, interval, num.norm_tolerance);
}

RunResult run_layout(const Layout& layout, const TrapParams& p, const Numerics1D& num) {
    num.validate();
    p.validate();
    RunResult result;
    Wavefunction1D psi = left_trap_ground_state(num.grid, layout.centers(0.0).front(), p, layout.gamma);

    // Populations and snapshots share the step grid; pick the finer cadence and filter.
    double interval = num.sample_interval;
    if (num.snapshot && num.snapshot_interval > 0.0)
        interval = interval > 0.0 ? std::min(interval, num.snapshot_interval) : num.snapshot_interval;
    double next_sample = 0.0, next_snapshot = 0.0;
    const double eps = 1e-6;
    Observer1D observer = [&](double t, const Wavefunction1D& state) {
        const bool at_end = std::abs(t - layout.t_end) < eps;
        if (num.snapshot && num.snapshot_interval > 0.0 && (t + eps >= next_snapshot || at_end)) {
            num.snapshot(t, state);
            next_snapshot += num.snapshot_interval;
        }
        if (num.sample_interval > 0.0 && t + eps >= next_sample && !at_end) {
            result.history.push_back(project(state, t, layout, p));
            next_sample += num.sample_interval;
        }
    };
    const bool observing = interval > 0.0;
    const auto stats = evolve(psi, layout, p, 0.0, layout.t_end, num, observing ? observer : Observer1D{}, interval);
    result.max_norm_drift = stats.max_norm_drift;

    LocalizedBasis final_basis;
    const auto last = project(psi, layout.t_end, layout, p, &final_basis);
    result.history.push_back(last);
    result.final_populations = last.rho;
    result.efficiency = last.rho[2];
    result.excited_fraction = last.excited;
    const cplx cl = psi.overlap(final_basis.orbitals.col(0));
    const cplx cr = psi.overlap(final_basis.orbitals.col(final_basis.orbitals.cols() - 1));
    result.coherence = std::abs(cl * std::conj(cr));
    result.final_state = std::move(psi);
    return result;
}

Layout three_trap_layout(const TrajectorySpec& traj, const PerturbationSpec& pert) {
    Layout layout;
    layout.centers = [traj, pert](double t) {
        const auto c = trap_centers(t, traj, pert);
        return std::vector<double>{c.left, c.middle, c.right};
    };
    layout.gamma = pert.gamma;
    layout.t_end = traj.duration();
    return layout;
}

TrajectorySpec rabi_trajectory(const PairSchedule& pair, RampShape ramp) {
    TrajectorySpec traj;
    traj.lm = pair;
    traj.mr = pair;
    traj.order = PulseOrder::Intuitive;  // LM pair starts at t = 0
    traj.ramp = ramp;
    traj.t_delay = 0.0;
    return traj;
}

Layout rabi_layout(const PairSchedule& pair, RampShape ramp, const PerturbationSpec& pert) {
    const TrajectorySpec traj = rabi_trajectory(pair, ramp);
    Layout layout;
    layout.centers = [traj](double t) { return std::vector<double>{-pair_distance(t, TrapPair::LM, traj), 0.0}; };
    layout.gamma = pert.gamma;
    layout.t_end = pair.t_r + pair.t_i + pair.separation_duration();
    return layout;
}

}  // namespace

RunResult run_stirap(const TrajectorySpec& traj, const PerturbationSpec& pert, const TrapParams& p,
                     const Numerics1D& num) {
    traj.validate();
    pert.validate();
    return run_layout(three_trap_layout(traj, pert), p, num);
}

RunResult run_cpt(const TrajectorySpec& traj, const PerturbationSpec& pert, const TrapParams& p,
                  const Numerics1D& num) {
    TrajectorySpec symmetric = traj;
    symmetric.separation = SeparationMode::Symmetric;
    symmetric.validate();
    pert.validate();
    return run_layout(three_trap_layout(symmetric, pert), p, num);
}

RunResult run_rabi(const PairSchedule& pair, RampShape ramp, const PerturbationSpec& pert, const TrapParams& p,
                   const Numerics1D& num) {
    TrajectorySpec check = rabi_trajectory(pair, ramp);
    check.validate();
    pert.validate();
    return run_layout(rabi_layout(pair, ramp, pert), p, num);
}

double calibrate_rabi_hold(const PairSchedule& pair, RampShape ramp, const TrapParams& p, const Numerics1D& num) {
    num.validate();
    const PerturbationSpec flat;
    const double J = tunneling_splitting(pair.d_min, p, num.grid);
    const double period = std::numbers::pi / J;  // transfer oscillates as sin^2(J t_i + const)

    // Shared approach ramp.
    PairSchedule base = pair;
    base.t_i = 0.0;
    const Layout approach = rabi_layout(base, ramp, flat);
    Wavefunction1D arrived = left_trap_ground_state(num.grid, approach.centers(0.0).front(), p, 0.0);
    evolve(arrived, approach, p, 0.0, pair.t_r, num, {}, 0.0);

    auto transfer = [&](double hold) {
        PairSchedule s = pair;
        s.t_i = hold;
        const Layout layout = rabi_layout(s, ramp, flat);
        Wavefunction1D psi = arrived;
        evolve(psi, layout, p, pair.t_r, layout.t_end, num, {}, 0.0);
        return project(psi, layout.t_end, layout, p).rho[2];
    };

    const double lo = std::max(0.0, pair.t_i - 0.5 * period);
    const double hi = pair.t_i + 0.5 * period;
    constexpr int coarse = 8;
    double best_t = lo, best = -1.0;
    for (int i = 0; i <= coarse; ++i) {
        const double t = lo + (hi - lo) * double(i) / coarse;
        const double v = transfer(t);
        if (v > best) best = v, best_t = t;
    }
    // Golden-section refinement around the best coarse point.
    const double step = (hi - lo) / coarse;
    double a = std::max(0.0, best_t - step), b = best_t + step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = transfer(c), fd = transfer(d);
    while (b - a > 0.02) {
        if (fc > fd) {
            b = d, d = c, fd = fc;
            c = b - g * (b - a);
            fc = transfer(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + g * (b - a);
            fd = transfer(d);
        }
    }
    return 0.5 * (a + b);
}

void write_csv(std::ostream& os, const RunResult& result) {
    os << "t,rho_L,rho_M,rho_R,excited_fraction\n" << std::setprecision(12);
    for (const auto& s : result.history)
        os << s.t << ',' << s.rho[0] << ',' << s.rho[1] << ',' << s.rho[2] << ',' << s.excited << '\n';
}

}  // namespace tlao
