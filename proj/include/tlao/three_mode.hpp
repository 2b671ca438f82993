#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tlao/spectral.hpp"

namespace tlao {

using cplx = std::complex<double>;

/// Amplitudes on the trap-localised basis |L>, |M>, |R>.
struct ThreeModeState {
    cplx left{1.0, 0.0};
    cplx middle{0.0, 0.0};
    cplx right{0.0, 0.0};

    Eigen::Vector3cd vector() const { return {left, middle, right}; }
    static ThreeModeState from(const Eigen::Vector3cd& v) { return {v(0), v(1), v(2)}; }
    std::array<double, 3> populations() const { return {std::norm(left), std::norm(middle), std::norm(right)}; }
    double norm() const { return std::norm(left) + std::norm(middle) + std::norm(right); }
};

/// H = -J_LM(|L><M| + h.c.) - J_MR(|M><R| + h.c.) - delta_M |M><M| - delta_R |R><R|,
/// with delta_M = mu_M - mu_L and delta_R = mu_R - mu_L.
struct ThreeModeHamiltonian {
    double J_LM = 0.0;
    double J_MR = 0.0;
    double delta_M = 0.0;
    double delta_R = 0.0;

    static ThreeModeHamiltonian from(const CouplingSample& s) {
        return {s.J_LM, s.J_MR, s.mu_M - s.mu_L, s.mu_R - s.mu_L};
    }
    Eigen::Matrix3d matrix() const;
};

/// Theta = atan2(J_LM, J_MR). Throws ConfigError when both couplings vanish.
double mixing_angle(double J_LM, double J_MR);

/// cos(Theta)|L> - sin(Theta)|R>.
ThreeModeState dark_state(double theta);

struct ThreeModeTrajectory {
    std::vector<double> t;
    std::vector<ThreeModeState> states;

    const ThreeModeState& final_state() const { return states.back(); }
};

/// Unitary exponential-midpoint stepping through the schedule. States are recorded
/// at every step whose time lands on a schedule sample (and at the end).
/// Throws ConfigError if dt * max||H|| >= 0.1 or the schedule ends before t_end.
ThreeModeTrajectory propagate(const ThreeModeState& initial, const CouplingSchedule& schedule, double dt,
                              std::optional<double> t_end = std::nullopt);

struct InstantaneousSpectrum {
    std::vector<double> t;
    std::vector<std::array<double, 3>> levels;  ///< continued by eigenvector overlap
    double min_gap = 0.0;
    double t_min_gap = 0.0;
};

InstantaneousSpectrum instantaneous_spectrum(const CouplingSchedule& schedule);

/// Header `t,P_L,P_M,P_R,E_1,E_2,E_3`; the spectrum is evaluated at the trajectory times.
void write_csv(std::ostream& os, const ThreeModeTrajectory& traj, const CouplingSchedule& schedule);

}  // namespace tlao
