#include "tlao/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tlao/errors.hpp"

namespace tlao {

namespace {

// Progress of an approach ramp, 0 at its start and 1 at its end.
double ramp_fraction(double s, RampShape shape) {
    s = std::clamp(s, 0.0, 1.0);
    if (shape == RampShape::Linear) return s;
    return 0.5 * (1.0 - std::cos(std::numbers::pi * s));
}

void validate_pair(const PairSchedule& p, const char* name) {
    const std::string tag = std::string("trajectory.") + name + ": ";
    if (!(p.d_min > 0.0)) throw ConfigError(tag + "d_min must be positive");
    if (!(p.d_min < p.d_max)) throw ConfigError(tag + "d_min must be smaller than d_max");
    if (!(p.t_r > 0.0)) throw ConfigError(tag + "t_r must be positive");
    if (!(p.t_i >= 0.0)) throw ConfigError(tag + "t_i must be non-negative");
    if (p.t_sep && !(*p.t_sep > 0.0)) throw ConfigError(tag + "t_sep must be positive");
}

}  // namespace

void TrapParams::validate() const {
    if (!(depth > 0.0) || !std::isfinite(depth)) throw ConfigError("trap.depth must be positive");
}

double harmonic_concatenation_ratio(double separation, const TrapParams& p) {
    return separation * separation / (8.0 * p.depth);
}

double TrajectorySpec::approach_start(TrapPair pair) const {
    const bool first = (order == PulseOrder::Counterintuitive) == (pair == TrapPair::MR);
    return first ? 0.0 : t_delay;
}

double TrajectorySpec::separation_start(TrapPair p) const {
    if (separation == SeparationMode::Symmetric) {
        return std::max(approach_start(TrapPair::LM) + lm.t_r + lm.t_i,
                        approach_start(TrapPair::MR) + mr.t_r + mr.t_i);
    }
    const auto& s = pair(p);
    return approach_start(p) + s.t_r + s.t_i;
}

double TrajectorySpec::duration() const {
    return std::max(separation_start(TrapPair::LM) + lm.separation_duration(),
                    separation_start(TrapPair::MR) + mr.separation_duration());
}

TrajectorySpec TrajectorySpec::dilated(double factor) const {
    TrajectorySpec out = *this;
    for (PairSchedule* p : {&out.lm, &out.mr}) {
        p->t_r *= factor;
        p->t_i *= factor;
        if (p->t_sep) *p->t_sep *= factor;
    }
    out.t_delay *= factor;
    return out;
}

TrajectorySpec TrajectorySpec::mirrored() const {
    TrajectorySpec out = *this;
    std::swap(out.lm, out.mr);
    out.order = order == PulseOrder::Counterintuitive ? PulseOrder::Intuitive
                                                      : PulseOrder::Counterintuitive;
    return out;
}

void TrajectorySpec::validate() const {
    validate_pair(lm, "lm");
    validate_pair(mr, "mr");
    if (!(t_delay >= 0.0)) throw ConfigError("trajectory.t_delay must be non-negative");
}

void PerturbationSpec::validate() const {
    if (!std::isfinite(gamma) || !std::isfinite(a_shake))
        throw ConfigError("perturbation: gamma and a_shake must be finite");
    if (!(omega_shake >= 0.0)) throw ConfigError("perturbation.omega_shake must be non-negative");
}

double gaussian_trap(double x, double center, const TrapParams& p) {
    const double u = x - center;
    return -p.depth * std::exp(-u * u / (2.0 * p.depth));
}

double pair_distance(double t, TrapPair pair, const TrajectorySpec& traj) {
    const PairSchedule& s = traj.pair(pair);
    const double t0 = traj.approach_start(pair);
    const double t_sep = traj.separation_start(pair);
    double progress;
    if (t <= t0) {
        progress = 0.0;
    } else if (t < t0 + s.t_r) {
        progress = ramp_fraction((t - t0) / s.t_r, traj.ramp);
    } else if (t < t_sep) {
        progress = 1.0;
    } else {
        progress = 1.0 - ramp_fraction((t - t_sep) / s.separation_duration(), traj.ramp);
    }
    return s.d_max + (s.d_min - s.d_max) * progress;
}

TrapCenters trap_centers(double t, const TrajectorySpec& traj, const PerturbationSpec& pert) {
    TrapCenters c{-pair_distance(t, TrapPair::LM, traj), 0.0, pair_distance(t, TrapPair::MR, traj)};
    if (pert.a_shake != 0.0) {
        const double swing = std::sin(pert.omega_shake * t);
        c.left += std::abs(pert.a_shake) * swing;
        c.right += pert.a_shake * swing;
    }
    return c;
}

double composite_potential(double x, std::span<const double> centers, const TrapParams& p,
                           double gamma) {
    // All traps share one depth, so the minimum is the Gaussian of the nearest centre.
    double nearest = std::numeric_limits<double>::infinity();
    for (double c : centers) nearest = std::min(nearest, (x - c) * (x - c));
    return -p.depth * std::exp(-nearest / (2.0 * p.depth)) + gamma * x;
}

double composite_potential(double x, double t, const TrajectorySpec& traj,
                           const PerturbationSpec& pert, const TrapParams& p) {
    const auto c = trap_centers(t, traj, pert).as_array();
    return composite_potential(x, c, p, pert.gamma);
}

void sample_potential(std::span<const double> xs, std::span<const double> centers,
                      const TrapParams& p, double gamma, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = composite_potential(xs[i], centers, p, gamma);
}

std::vector<double> sample_potential(const Grid1D& grid, std::span<const double> centers,
                                     const TrapParams& p, double gamma) {
    const auto xs = grid.points();
    std::vector<double> v(xs.size());
    sample_potential(xs, centers, p, gamma, v);
    return v;
}

TrapCenters WaveguideGeometry::centers(double y) const {
    return trap_centers(y - y_start, profile, PerturbationSpec{});
}

double WaveguideGeometry::min_separation(double step) const {
    double best = std::numeric_limits<double>::infinity();
    for (double y = y_start; y <= y_end() + step; y += step) {
        const auto c = centers(y);
        best = std::min({best, c.middle - c.left, c.right - c.middle});
    }
    return best;
}

void WaveguideGeometry::validate() const { profile.validate(); }

double waveguide_potential(double x, double y, const WaveguideGeometry& geom, const TrapParams& p) {
    const auto c = geom.centers(y).as_array();
    return composite_potential(x, c, p, 0.0);
}

}  // namespace tlao
