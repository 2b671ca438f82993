#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "tlao/grid.hpp"

// All quantities are dimensionless: hbar = m = omega_x = 1, lengths in units
// of the harmonic ground-state size, energies in hbar*omega_x.
namespace tlao {

struct TrapParams {
    /// Trap depth; the bottom of an isolated trap sits at -depth.
    double depth = 100.0;

    void validate() const;
};

/// a^2 / (8 V0): the three traps concatenate into harmonic wells when this is << 1.
double harmonic_concatenation_ratio(double separation, const TrapParams& p);

enum class RampShape { Linear, Cosine };
enum class PulseOrder { Counterintuitive, Intuitive };
/// Sequential: each pair separates right after its own hold (STIRAP).
/// Symmetric: both pairs start separating together once the later pair has held (CPT).
enum class SeparationMode { Sequential, Symmetric };
enum class TrapPair { LM, MR };

/// Distance schedule for one pair of neighbouring traps.
struct PairSchedule {
    double d_max = 9.0;
    double d_min = 1.5;
    double t_r = 300.0;            ///< approach duration
    double t_i = 0.0;              ///< hold at d_min
    std::optional<double> t_sep;   ///< separation duration, t_r when unset

    double separation_duration() const { return t_sep.value_or(t_r); }
};

struct TrajectorySpec {
    PairSchedule lm;
    PairSchedule mr;
    double t_delay = 120.0;
    PulseOrder order = PulseOrder::Counterintuitive;
    RampShape ramp = RampShape::Cosine;
    SeparationMode separation = SeparationMode::Sequential;

    double approach_start(TrapPair pair) const;
    double separation_start(TrapPair pair) const;
    double duration() const;

    /// Stretches every duration (t_r, t_i, t_sep, t_delay) by `factor`.
    TrajectorySpec dilated(double factor) const;
    /// Swaps the roles of the LM and MR pairs and flips the pulse order.
    TrajectorySpec mirrored() const;

    const PairSchedule& pair(TrapPair p) const { return p == TrapPair::LM ? lm : mr; }

    void validate() const;
};

struct PerturbationSpec {
    double gamma = 0.0;         ///< tilt slope, adds gamma * x
    double a_shake = 0.0;       ///< >0: outer traps in phase, <0: out of phase by pi
    double omega_shake = 1e-2;

    void validate() const;
};

struct TrapCenters {
    double left;
    double middle;
    double right;

    std::array<double, 3> as_array() const { return {left, middle, right}; }
};

double gaussian_trap(double x, double center, const TrapParams& p);

/// Unperturbed distance of a trap pair at time t.
double pair_distance(double t, TrapPair pair, const TrajectorySpec& traj);

TrapCenters trap_centers(double t, const TrajectorySpec& traj, const PerturbationSpec& pert);

/// min over equal-depth Gaussians centred at `centers`, plus the tilt gamma * x.
double composite_potential(double x, std::span<const double> centers, const TrapParams& p,
                           double gamma = 0.0);
double composite_potential(double x, double t, const TrajectorySpec& traj,
                           const PerturbationSpec& pert, const TrapParams& p);

/// Fills `out` with the composite potential sampled on `xs`.
void sample_potential(std::span<const double> xs, std::span<const double> centers,
                      const TrapParams& p, double gamma, std::span<double> out);
std::vector<double> sample_potential(const Grid1D& grid, std::span<const double> centers,
                                     const TrapParams& p, double gamma = 0.0);

/// Three guides along y whose transverse centres follow a trajectory with t -> y - y_start.
struct WaveguideGeometry {
    TrajectorySpec profile;
    double y_start = 0.0;

    TrapCenters centers(double y) const;
    double y_end() const { return y_start + profile.duration(); }
    /// Smallest neighbour distance along the profile, sampled every `step`.
    double min_separation(double step = 0.05) const;

    void validate() const;
};

double waveguide_potential(double x, double y, const WaveguideGeometry& geom, const TrapParams& p);

}  // namespace tlao
