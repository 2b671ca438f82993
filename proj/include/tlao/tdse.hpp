#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "tlao/fft.hpp"
#include "tlao/grid.hpp"
#include "tlao/potentials.hpp"
#include "tlao/spectral.hpp"

namespace tlao {

using cplx = std::complex<double>;

struct Wavefunction1D {
    Grid1D grid;
    std::vector<cplx> values;

    double norm() const;
    void normalize();
    /// <f|psi> with the grid measure, f real.
    cplx overlap(const Eigen::VectorXd& f) const;
};

/// Second-order Strang splitting: exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) with
/// the kinetic factor applied exactly in Fourier space.
class SplitStep1D {
public:
    SplitStep1D(const Grid1D& grid, double dt);

    /// Advances psi by one step; `potential` is sampled at the step midpoint.
    void step(std::span<cplx> psi, std::span<const double> potential);
    double dt() const { return dt_; }

private:
    Grid1D grid_;
    double dt_;
    FftPlan fft_;
    std::vector<cplx> kinetic_;
    std::vector<cplx> half_potential_;
};

/// Writes V(x, t) on the grid points into `out`.
using PotentialSampler = std::function<void(double t, std::span<double> out)>;
using Observer1D = std::function<void(double t, const Wavefunction1D& psi)>;

struct PropagationStats {
    double t_end = 0.0;
    std::size_t steps = 0;
    double max_norm_drift = 0.0;
};

/// Propagates psi from t0 to t1 with a step no larger than dt (the span is split into
/// equal steps). `observe` is called at t0, then every `observe_interval` (when > 0)
/// and at t1. Throws NumericalIntegrityError if the norm drifts by more than
/// `norm_tolerance`.
PropagationStats propagate(Wavefunction1D& psi, const PotentialSampler& potential, double t0, double t1,
                           double dt, const Observer1D& observe = {}, double observe_interval = 0.0,
                           double norm_tolerance = 1e-6);

/// Lowest eigenstate of the sampled potential (finite-difference spectral route).
/// Throws NumericalIntegrityError if the eigen-residual exceeds 1e-8.
Wavefunction1D ground_state(const Grid1D& grid, std::span<const double> potential, double* energy = nullptr);

/// <H> with the spectral kinetic operator.
double energy(const Wavefunction1D& psi, std::span<const double> potential);
/// <x> and <x^2> - <x>^2 of |psi|^2.
std::array<double, 2> position_moments(const Wavefunction1D& psi);

struct Numerics1D {
    Grid1D grid = default_grid();
    double dt = 0.01;
    double sample_interval = 5.0;   ///< population sampling; 0 records only start and end
    double norm_tolerance = 1e-6;
    double snapshot_interval = 0.0;  ///< 0 disables snapshots
    Observer1D snapshot;

    void validate() const;
};

struct PopulationSample {
    double t = 0.0;
    std::array<double, 3> rho{};  ///< L, M, R
    double excited = 0.0;         ///< norm outside the localised subspace
};

struct RunResult {
    std::vector<PopulationSample> history;
    std::array<double, 3> final_populations{};
    double efficiency = 0.0;     ///< population of the target trap
    double excited_fraction = 0.0;
    double coherence = 0.0;      ///< |<L|psi><psi|R>| at the end
    double max_norm_drift = 0.0;
    Wavefunction1D final_state;
};

/// Three-trap transport from the left-trap ground state, pulse order as given by
/// `traj`; efficiency is rho_R.
RunResult run_stirap(const TrajectorySpec& traj, const PerturbationSpec& pert, const TrapParams& p,
                     const Numerics1D& num = {});

/// Three-trap sequence with symmetric separation (the separation mode is forced);
/// efficiency is rho_R and `coherence` carries |<L|psi><psi|R>|.
RunResult run_cpt(const TrajectorySpec& traj, const PerturbationSpec& pert, const TrapParams& p,
                  const Numerics1D& num = {});

/// Two traps: a left trap following `pair` towards a fixed trap at the origin.
/// Populations are reported as {left, 0, right} with "right" the fixed target trap.
RunResult run_rabi(const PairSchedule& pair, RampShape ramp, const PerturbationSpec& pert,
                   const TrapParams& p, const Numerics1D& num = {});

/// Hold time t_i, near pair.t_i and within half a tunnelling period of it, that
/// maximises the untilted Rabi transfer.
double calibrate_rabi_hold(const PairSchedule& pair, RampShape ramp, const TrapParams& p,
                           const Numerics1D& num = {});

/// Header `t,rho_L,rho_M,rho_R,excited_fraction`.
void write_csv(std::ostream& os, const RunResult& result);

}  // namespace tlao
