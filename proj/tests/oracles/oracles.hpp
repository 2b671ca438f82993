#pragma once

// Independent reference implementations used only by the tests. They share no
// numerical code with the library beyond the potential definitions.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

/// Lowest `count` eigenvalues of -f''/2 + V on [a, b] with Dirichlet ends, by
/// second-order finite differences at n and 2n interior points, Richardson-extrapolated.
std::vector<double> richardson_eigenvalues(const std::function<double(double)>& v, double a, double b,
                                           std::size_t n, std::size_t count);

/// Crank-Nicolson propagation of psi on a uniform periodic-free grid (Dirichlet ends)
/// with second-order finite-difference kinetic energy. `v(t, x)` is sampled at step
/// midpoints; `shift` is added to V so that |E| dt stays small.
void crank_nicolson(std::vector<cplx>& psi, double x_min, double dx, const std::function<double(double, double)>& v,
                    double t0, double t1, double dt, double shift);

/// Classical RK4 for i dc/dt = H(t) c with a fixed small step.
Eigen::Vector3cd rk4_three_level(const std::function<Eigen::Matrix3d(double)>& h, Eigen::Vector3cd c, double t0,
                                 double t1, double dt);

}  // namespace oracle
