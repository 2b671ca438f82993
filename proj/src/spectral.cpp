#include "tlao/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

#include <lapacke.h>

#include "tlao/errors.hpp"

namespace tlao {

namespace {

void check_inputs(const Grid1D& grid, std::span<const double> potential, std::size_t count) {
    if (potential.size() != grid.n) throw ConfigError("potential size does not match the grid");
    if (count == 0 || count > grid.n) throw ConfigError("requested eigenpair count exceeds the grid size");
    for (double v : potential)
        if (!std::isfinite(v)) throw ConfigError("potential has non-finite samples");
}

// First row of the periodic Fourier kinetic matrix (circulant, symmetric).
std::vector<double> fourier_kinetic_row(const Grid1D& grid) {
    const std::size_t n = grid.n;
    const auto k = grid.wavenumbers();
    std::vector<double> row(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            acc += 0.5 * k[m] * k[m] * std::cos(2.0 * std::numbers::pi * double(m * j % n) / double(n));
        row[j] = acc / double(n);
    }
    return row;
}

void normalize_columns(Eigen::MatrixXd& states, double dx) {
    for (Eigen::Index c = 0; c < states.cols(); ++c) states.col(c) /= std::sqrt(states.col(c).squaredNorm() * dx);
}

Spectrum finite_difference_states(const Grid1D& grid, std::span<const double> potential,
                                  std::size_t count) {
    const auto n = static_cast<lapack_int>(grid.n);
    const double h2 = grid.dx() * grid.dx();
    std::vector<double> diag(grid.n), off(grid.n, -0.5 / h2);
    for (std::size_t i = 0; i < grid.n; ++i) diag[i] = 1.0 / h2 + potential[i];

    const auto m_req = static_cast<lapack_int>(count);
    lapack_int found = 0;
    std::vector<double> w(grid.n);
    Eigen::MatrixXd z(grid.n, count);
    std::vector<lapack_int> support(2 * count);
    const lapack_int info =
        LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, m_req,
                       0.0, &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != m_req)
        throw NumericalIntegrityError("tridiagonal eigensolver failed (info " + std::to_string(info) + ")");

    Spectrum out;
    out.energies = Eigen::Map<Eigen::VectorXd>(w.data(), m_req);
    out.states = std::move(z);
    normalize_columns(out.states, grid.dx());
    return out;
}

Spectrum fourier_grid_states(const Grid1D& grid, std::span<const double> potential,
                             std::size_t count) {
    const std::size_t n = grid.n;
    const auto row = fourier_kinetic_row(grid);
    Eigen::MatrixXd h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = row[(i + n - j) % n];
    for (std::size_t i = 0; i < n; ++i) h(i, i) += potential[i];

    const auto ni = static_cast<lapack_int>(n);
    const auto m_req = static_cast<lapack_int>(count);
    lapack_int found = 0;
    std::vector<double> w(n);
    Eigen::MatrixXd z(n, count);
    std::vector<lapack_int> support(2 * n);
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', ni, h.data(), ni, 0.0, 0.0,
                                           1, m_req, 0.0, &found, w.data(), z.data(), ni, support.data());
    if (info != 0 || found != m_req)
        throw NumericalIntegrityError("dense eigensolver failed (info " + std::to_string(info) + ")");

    Spectrum out;
    out.energies = Eigen::Map<Eigen::VectorXd>(w.data(), m_req);
    out.states = std::move(z);
    normalize_columns(out.states, grid.dx());
    return out;
}

}  // namespace

Grid1D default_grid() { return Grid1D{-16.0, 16.0, 1024}; }

Spectrum stationary_states(const Grid1D& grid, std::span<const double> potential, std::size_t count,
                           Discretization disc) {
    check_inputs(grid, potential, count);
    return disc == Discretization::FiniteDifference ? finite_difference_states(grid, potential, count)
                                                    : fourier_grid_states(grid, potential, count);
}

Eigen::VectorXd apply_hamiltonian(const Grid1D& grid, std::span<const double> potential,
                                  const Eigen::VectorXd& f, Discretization disc) {
    const auto n = static_cast<Eigen::Index>(grid.n);
    Eigen::VectorXd out(n);
    if (disc == Discretization::FiniteDifference) {
        const double h2 = grid.dx() * grid.dx();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double left = i > 0 ? f(i - 1) : 0.0;
            const double right = i + 1 < n ? f(i + 1) : 0.0;
            out(i) = -0.5 * (left - 2.0 * f(i) + right) / h2 + potential[i] * f(i);
        }
        return out;
    }
    const auto row = fourier_kinetic_row(grid);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = potential[i] * f(i);
        for (Eigen::Index j = 0; j < n; ++j) acc += row[(i + n - j) % n] * f(j);
        out(i) = acc;
    }
    return out;
}

LocalizedBasis localized_basis(const Grid1D& grid, const Spectrum& lowest,
                               std::span<const double> centers, double min_separation) {
    const auto k = lowest.states.cols();
    if (static_cast<std::size_t>(k) != centers.size())
        throw ConfigError("localized_basis: one trap centre per eigenstate required");

    const double dx = grid.dx();
    const auto xs = grid.points();
    const Eigen::Map<const Eigen::VectorXd> x(xs.data(), static_cast<Eigen::Index>(xs.size()));
    const Eigen::MatrixXd position = lowest.states.transpose() * x.asDiagonal() * lowest.states * dx;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(position);
    const Eigen::VectorXd& where = solver.eigenvalues();
    for (Eigen::Index a = 1; a < k; ++a) {
        if (where(a) - where(a - 1) < min_separation)
            throw BasisUnresolved("position eigenvalues " + std::to_string(where(a - 1)) + " and " +
                                  std::to_string(where(a)) + " are not resolved");
    }

    std::vector<double> sorted(centers.begin(), centers.end());
    std::sort(sorted.begin(), sorted.end());

    Eigen::MatrixXd rotation = solver.eigenvectors();
    LocalizedBasis basis;
    basis.orbitals = lowest.states * rotation;
    for (Eigen::Index a = 0; a < k; ++a) {
        const double pos = std::clamp(sorted[a], grid.x_min, grid.x_max - dx);
        const auto i = static_cast<Eigen::Index>(std::lround((pos - grid.x_min) / dx));
        if (basis.orbitals(std::min<Eigen::Index>(i, basis.orbitals.rows() - 1), a) < 0.0) {
            basis.orbitals.col(a) *= -1.0;
            rotation.col(a) *= -1.0;
        }
    }
    basis.positions = where;
    basis.site_hamiltonian = rotation.transpose() * lowest.energies.asDiagonal() * rotation;
    return basis;
}

LocalizedBasis localized_basis_for(const Grid1D& grid, std::span<const double> centers,
                                   const TrapParams& p, double gamma) {
    const auto v = sample_potential(grid, centers, p, gamma);
    const auto spectrum = stationary_states(grid, v, centers.size());
    return localized_basis(grid, spectrum, centers);
}

double tunneling_splitting(double d, const TrapParams& p, const Grid1D& grid) {
    if (!(d > 0.0)) throw ConfigError("tunneling_splitting: distance must be positive");
    const std::array<double, 2> centers{-0.5 * d, 0.5 * d};
    const auto v = sample_potential(grid, centers, p);
    const auto s = stationary_states(grid, v, 2);
    return 0.5 * (s.energies(1) - s.energies(0));
}

CouplingSample CouplingSchedule::at(double t) const {
    if (samples.empty()) throw ConfigError("empty coupling schedule");
    const double tol = 1e-9 * std::max(1.0, std::abs(t_end()));
    if (t < t_begin() - tol || t > t_end() + tol)
        throw ConfigError("coupling schedule does not cover t = " + std::to_string(t));
    if (samples.size() == 1) return samples.front();
    const double step = (t_end() - t_begin()) / double(samples.size() - 1);
    const double u = std::clamp((t - t_begin()) / step, 0.0, double(samples.size() - 1));
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(u), samples.size() - 2);
    const double w = u - double(i);
    const auto& a = samples[i];
    const auto& b = samples[i + 1];
    auto mix = [w](double x, double y) { return (1.0 - w) * x + w * y; };
    return {t,
            mix(a.J_LM, b.J_LM),
            mix(a.J_MR, b.J_MR),
            mix(a.mu_L, b.mu_L),
            mix(a.mu_M, b.mu_M),
            mix(a.mu_R, b.mu_R),
            mix(a.J_LR, b.J_LR)};
}

CouplingSchedule coupling_schedule(const TrajectorySpec& traj, const PerturbationSpec& pert,
                                   const TrapParams& p, std::size_t sample_count, const Grid1D& grid) {
    if (sample_count < 2) throw ConfigError("coupling_schedule: need at least two samples");
    CouplingSchedule out;
    out.samples.reserve(sample_count);
    const double total = traj.duration();
    for (std::size_t s = 0; s < sample_count; ++s) {
        const double t = total * double(s) / double(sample_count - 1);
        const auto c = trap_centers(t, traj, pert);
        const auto centers = c.as_array();
        const auto basis = localized_basis_for(grid, centers, p, pert.gamma);
        CouplingSample sample;
        sample.t = t;
        sample.J_LM = tunneling_splitting(c.middle - c.left, p, grid);
        sample.J_MR = tunneling_splitting(c.right - c.middle, p, grid);
        sample.mu_L = basis.onsite(0);
        sample.mu_M = basis.onsite(1);
        sample.mu_R = basis.onsite(2);
        sample.J_LR = basis.coupling(0, 2);
        out.samples.push_back(sample);
    }
    return out;
}

void write_csv(std::ostream& os, const CouplingSchedule& schedule) {
    os << "t,J_LM,J_MR,mu_L,mu_M,mu_R\n" << std::setprecision(12);
    for (const auto& s : schedule.samples)
        os << s.t << ',' << s.J_LM << ',' << s.J_MR << ',' << s.mu_L << ',' << s.mu_M << ',' << s.mu_R << '\n';
}

}  // namespace tlao
