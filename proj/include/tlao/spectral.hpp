#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tlao/grid.hpp"
#include "tlao/potentials.hpp"

namespace tlao {

/// Kinetic-energy discretisation used by the stationary solver.
///  FiniteDifference: second-order central differences (tridiagonal, fast).
///  FourierGrid: periodic sinc/Fourier kinetic operator (dense, spectrally accurate,
///  the same kinetic operator the split-step propagators use).
enum class Discretization { FiniteDifference, FourierGrid };

/// Default grid for stationary problems: [-16, 16), 1024 points.
Grid1D default_grid();

struct Spectrum {
    Eigen::VectorXd energies;  ///< ascending
    Eigen::MatrixXd states;    ///< one column per energy, sum |phi|^2 dx = 1
};

/// The `count` lowest eigenpairs of p^2/2 + V on the grid.
/// Throws ConfigError if count exceeds the grid size or V has non-finite samples.
Spectrum stationary_states(const Grid1D& grid, std::span<const double> potential, std::size_t count,
                           Discretization disc = Discretization::FiniteDifference);

/// H f for the same discretisation stationary_states diagonalises.
Eigen::VectorXd apply_hamiltonian(const Grid1D& grid, std::span<const double> potential,
                                  const Eigen::VectorXd& f,
                                  Discretization disc = Discretization::FiniteDifference);

enum class Site : std::size_t { Left = 0, Middle = 1, Right = 2 };
constexpr std::size_t index(Site s) { return static_cast<std::size_t>(s); }

/// Wannier-style trap-localised orbitals spanning the lowest eigenstates.
struct LocalizedBasis {
    Eigen::MatrixXd orbitals;          ///< columns ordered left to right
    Eigen::VectorXd positions;         ///< <x> of each orbital
    Eigen::MatrixXd site_hamiltonian;  ///< <phi_a|H|phi_b>

    std::size_t size() const { return static_cast<std::size_t>(orbitals.cols()); }
    /// Tunnelling matrix element J_ab = -<phi_a|H|phi_b>.
    double coupling(std::size_t a, std::size_t b) const { return -site_hamiltonian(a, b); }
    /// On-site energy mu_a = -<phi_a|H|phi_a>.
    double onsite(std::size_t a) const { return -site_hamiltonian(a, a); }
};

/// Diagonalises the position operator inside the span of `lowest`. Each orbital is
/// sign-fixed to be positive at the grid point nearest to its trap centre (centres
/// are matched to orbitals in ascending order). Throws BasisUnresolved when two
/// position eigenvalues are closer than `min_separation`.
LocalizedBasis localized_basis(const Grid1D& grid, const Spectrum& lowest,
                               std::span<const double> centers, double min_separation = 0.1);

/// Convenience: diagonalise the composite potential with the given centres and localise.
LocalizedBasis localized_basis_for(const Grid1D& grid, std::span<const double> centers,
                                   const TrapParams& p, double gamma = 0.0);

/// J = (E_1 - E_0) / 2 for two traps at distance d, placed at -d/2 and +d/2.
double tunneling_splitting(double d, const TrapParams& p, const Grid1D& grid = default_grid());

struct CouplingSample {
    double t = 0.0;
    double J_LM = 0.0;
    double J_MR = 0.0;
    double mu_L = 0.0;
    double mu_M = 0.0;
    double mu_R = 0.0;
    double J_LR = 0.0;  ///< next-nearest neighbour, diagnostic only
};

/// Uniformly sampled couplings; values between samples are linearly interpolated.
struct CouplingSchedule {
    std::vector<CouplingSample> samples;

    double t_begin() const { return samples.front().t; }
    double t_end() const { return samples.back().t; }
    CouplingSample at(double t) const;
};

/// J_LM, J_MR from the two-trap tunnelling splitting at the instantaneous pair
/// distances; mu from the three-trap localised basis, tilt included.
CouplingSchedule coupling_schedule(const TrajectorySpec& traj, const PerturbationSpec& pert,
                                   const TrapParams& p, std::size_t sample_count,
                                   const Grid1D& grid = default_grid());

/// Header `t,J_LM,J_MR,mu_L,mu_M,mu_R`.
void write_csv(std::ostream& os, const CouplingSchedule& schedule);

}  // namespace tlao
