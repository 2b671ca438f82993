#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "tlao/grid.hpp"
#include "tlao/potentials.hpp"
#include "tlao/tdse.hpp"

namespace tlao {

/// Contact interaction g1d * delta(x1 - x2), regularised as g1d * G_w(x1 - x2) with
/// G_w a unit-area Gaussian of standard deviation w.
struct InteractionSpec {
    double g1d = 0.0;
    double width = 0.5;

    /// Throws ConfigError when w < 2 dx of `grid`.
    void validate(const Grid1D& grid) const;
};

/// On-site energy U = g1d * <G_w(x1 - x2)> of two atoms sharing the ground state of
/// one isolated trap.
double onsite_interaction(const InteractionSpec& inter, const TrapParams& p, const Grid1D& grid);

/// g1d chosen so that onsite_interaction equals `target_u`.
InteractionSpec calibrated_interaction(double target_u, double width, const TrapParams& p, const Grid1D& grid);

/// psi(x1, x2) on grid x grid, row-major with x2 fastest.
struct TwoBodyWavefunction {
    Grid1D grid;
    std::vector<cplx> values;

    std::size_t n() const { return grid.n; }
    cplx& at(std::size_t i1, std::size_t i2) { return values[i1 * grid.n + i2]; }
    const cplx& at(std::size_t i1, std::size_t i2) const { return values[i1 * grid.n + i2]; }

    double norm() const;
    /// max |psi(x1, x2) - psi(x2, x1)|, relative to max |psi|.
    double symmetry_residual() const;
    /// One-body density n(x) = 2 * integral |psi(x, x2)|^2 dx2 (integrates to 2).
    std::vector<double> reduced_density() const;
};

/// Symmetrised product of the middle- and right-trap localised orbitals at t = 0
/// (hole in the left trap).
TwoBodyWavefunction build_initial_hole_state(const Grid1D& grid, const TrajectorySpec& traj,
                                             const PerturbationSpec& pert, const TrapParams& p);

/// Hole transport schedule: t_r = 350, t_i = 100, t_delay = 180, d 9 -> 1.5, MR pair first.
TrajectorySpec hole_transport_trajectory();

struct Numerics2P {
    Grid1D grid{-16.0, 16.0, 256};
    double dt = 0.02;
    double sample_interval = 5.0;
    double norm_tolerance = 1e-6;
    double symmetry_tolerance = 1e-6;
    double snapshot_interval = 0.0;
    std::function<void(double, const TwoBodyWavefunction&)> snapshot;

    void validate() const;
};

struct HoleSample {
    double t = 0.0;
    std::array<double, 3> holes{};     ///< h_a = 1 - <n_a>
    double particle_number = 0.0;      ///< <n_L> + <n_M> + <n_R>
    double hole_fidelity = 0.0;        ///< probability of one atom in L and one in M
};

struct HoleResult {
    std::vector<HoleSample> history;
    std::array<double, 3> final_holes{};
    double hole_fidelity = 0.0;
    double max_norm_drift = 0.0;
    double max_symmetry_residual = 0.0;
    TwoBodyWavefunction final_state;
};

/// Occupations from the instantaneous localised basis at time t.
HoleSample project_holes(const TwoBodyWavefunction& psi, double t, const TrajectorySpec& traj,
                         const PerturbationSpec& pert, const TrapParams& p);

using Observer2P = std::function<void(double t, const TwoBodyWavefunction& psi)>;

/// Strang split-step for V(x1, t) + V(x2, t) + g1d G_w(x1 - x2). Throws
/// NumericalIntegrityError on norm or exchange-symmetry drift beyond the tolerances.
/// `*max_symmetry_residual`, when given, is raised to the largest residual seen.
PropagationStats propagate2(TwoBodyWavefunction& psi, const TrajectorySpec& traj, const PerturbationSpec& pert,
                            const InteractionSpec& inter, const TrapParams& p, double t0, double t1,
                            double dt, const Observer2P& observe = {}, double observe_interval = 0.0,
                            double norm_tolerance = 1e-6, double symmetry_tolerance = 1e-6,
                            double* max_symmetry_residual = nullptr);

HoleResult run_hole_stirap(const TrajectorySpec& traj, const PerturbationSpec& pert, const InteractionSpec& inter,
                           const TrapParams& p, const Numerics2P& num = {});

/// Header `t,h_L,h_M,h_R`.
void write_csv(std::ostream& os, const HoleResult& result);

}  // namespace tlao
