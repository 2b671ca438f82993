#include "tlao/three_mode.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "tlao/errors.hpp"

namespace tlao {

namespace {

Eigen::Matrix3cd unitary_step(const Eigen::Matrix3d& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(h);
    const Eigen::Vector3d& e = solver.eigenvalues();
    Eigen::Vector3cd phase;
    for (int i = 0; i < 3; ++i) phase(i) = std::polar(1.0, -e(i) * dt);
    const Eigen::Matrix3cd v = solver.eigenvectors().cast<cplx>();
    return v * phase.asDiagonal() * v.adjoint();
}

// Largest eigenvalue magnitude; for a real symmetric matrix this is the spectral norm.
double spectral_norm(const Eigen::Matrix3d& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Eigen::Matrix3d ThreeModeHamiltonian::matrix() const {
    Eigen::Matrix3d h;
    h << 0.0, -J_LM, 0.0,
        -J_LM, -delta_M, -J_MR,
        0.0, -J_MR, -delta_R;
    return h;
}

double mixing_angle(double J_LM, double J_MR) {
    if (J_LM == 0.0 && J_MR == 0.0) throw ConfigError("mixing angle undefined when both couplings vanish");
    return std::atan2(J_LM, J_MR);
}

ThreeModeState dark_state(double theta) { return {std::cos(theta), 0.0, -std::sin(theta)}; }

ThreeModeTrajectory propagate(const ThreeModeState& initial, const CouplingSchedule& schedule, double dt,
                              std::optional<double> t_end) {
    if (!(dt > 0.0)) throw ConfigError("three-mode propagate: dt must be positive");
    const double t0 = schedule.t_begin();
    const double t1 = t_end.value_or(schedule.t_end());
    if (t1 > schedule.t_end() + 1e-9) throw ConfigError("coupling schedule is shorter than the requested evolution");

    double h_max = 0.0;
    for (const auto& s : schedule.samples) h_max = std::max(h_max, spectral_norm(ThreeModeHamiltonian::from(s).matrix()));
    if (dt * h_max >= 0.1) throw ConfigError("three-mode propagate: dt * max||H|| must stay below 0.1");

    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
    const double h = (t1 - t0) / double(std::max<std::size_t>(steps, 1));
    const double sample_dt = schedule.samples.size() > 1
                                 ? (schedule.t_end() - schedule.t_begin()) / double(schedule.samples.size() - 1)
                                 : t1 - t0;
    const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(sample_dt / h)));

    ThreeModeTrajectory out;
    Eigen::Vector3cd c = initial.vector();
    out.t.push_back(t0);
    out.states.push_back(initial);
    for (std::size_t s = 0; s < steps; ++s) {
        const double tm = t0 + (double(s) + 0.5) * h;
        c = unitary_step(ThreeModeHamiltonian::from(schedule.at(tm)).matrix(), h) * c;
        if ((s + 1) % stride == 0 || s + 1 == steps) {
            out.t.push_back(t0 + double(s + 1) * h);
            out.states.push_back(ThreeModeState::from(c));
        }
    }
    return out;
}

InstantaneousSpectrum instantaneous_spectrum(const CouplingSchedule& schedule) {
    InstantaneousSpectrum out;
    out.min_gap = std::numeric_limits<double>::infinity();
    Eigen::Matrix3d previous;
    for (std::size_t s = 0; s < schedule.samples.size(); ++s) {
        const auto& sample = schedule.samples[s];
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(ThreeModeHamiltonian::from(sample).matrix());
        Eigen::Matrix3d vecs = solver.eigenvectors();
        Eigen::Vector3d vals = solver.eigenvalues();
        if (s > 0) {
            // Greedy assignment of each previous curve to the eigenvector it overlaps most.
            const Eigen::Matrix3d overlap = (previous.transpose() * vecs).cwiseAbs();
            std::array<int, 3> take{-1, -1, -1};
            std::array<bool, 3> used{false, false, false};
            for (int round = 0; round < 3; ++round) {
                double best = -1.0;
                int bi = 0, bj = 0;
                for (int i = 0; i < 3; ++i) {
                    if (take[i] >= 0) continue;
                    for (int j = 0; j < 3; ++j) {
                        if (used[j]) continue;
                        if (overlap(i, j) > best) best = overlap(i, j), bi = i, bj = j;
                    }
                }
                take[bi] = bj;
                used[bj] = true;
            }
            Eigen::Matrix3d v2;
            Eigen::Vector3d e2;
            for (int i = 0; i < 3; ++i) {
                v2.col(i) = vecs.col(take[i]);
                if (v2.col(i).dot(previous.col(i)) < 0.0) v2.col(i) *= -1.0;
                e2(i) = vals(take[i]);
            }
            vecs = v2;
            vals = e2;
        }
        previous = vecs;
        out.t.push_back(sample.t);
        out.levels.push_back({vals(0), vals(1), vals(2)});

        std::array<double, 3> sorted{vals(0), vals(1), vals(2)};
        std::sort(sorted.begin(), sorted.end());
        const double gap = std::min(sorted[1] - sorted[0], sorted[2] - sorted[1]);
        if (gap < out.min_gap) {
            out.min_gap = gap;
            out.t_min_gap = sample.t;
        }
    }
    return out;
}

void write_csv(std::ostream& os, const ThreeModeTrajectory& traj, const CouplingSchedule& schedule) {
    os << "t,P_L,P_M,P_R,E_1,E_2,E_3\n" << std::setprecision(12);
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const auto p = traj.states[i].populations();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(
            ThreeModeHamiltonian::from(schedule.at(traj.t[i])).matrix(), Eigen::EigenvaluesOnly);
        const auto& e = solver.eigenvalues();
        os << traj.t[i] << ',' << p[0] << ',' << p[1] << ',' << p[2] << ',' << e(0) << ',' << e(1) << ','
           << e(2) << '\n';
    }
}

}  // namespace tlao
