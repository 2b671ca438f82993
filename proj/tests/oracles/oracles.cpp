#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

std::vector<double> fd_eigenvalues(const std::function<double(double)>& v, double a, double b, std::size_t n,
                                   std::size_t count) {
    const double h = (b - a) / double(n + 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        m(k, k) = 1.0 / (h * h) + v(a + double(i + 1) * h);
        if (i + 1 < n) m(k, k + 1) = m(k + 1, k) = -0.5 / (h * h);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
    return out;
}

}  // namespace

std::vector<double> richardson_eigenvalues(const std::function<double(double)>& v, double a, double b,
                                           std::size_t n, std::size_t count) {
    const auto coarse = fd_eigenvalues(v, a, b, n, count);
    const auto fine = fd_eigenvalues(v, a, b, 2 * n + 1, count);  // halves h exactly
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    return out;
}

void crank_nicolson(std::vector<cplx>& psi, double x_min, double dx, const std::function<double(double, double)>& v,
                    double t0, double t1, double dt, double shift) {
    const std::size_t n = psi.size();
    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
    const double h = (t1 - t0) / double(steps);
    const cplx I(0.0, 1.0);
    const double off = -0.5 / (dx * dx);
    std::vector<double> diag(n);
    std::vector<cplx> rhs(n), c_prime(n), d_prime(n);
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + (double(s) + 0.5) * h;
        for (std::size_t i = 0; i < n; ++i) diag[i] = 1.0 / (dx * dx) + v(t, x_min + double(i) * dx) + shift;
        // (1 + i h H / 2) psi_new = (1 - i h H / 2) psi
        for (std::size_t i = 0; i < n; ++i) {
            cplx hpsi = diag[i] * psi[i];
            if (i > 0) hpsi += off * psi[i - 1];
            if (i + 1 < n) hpsi += off * psi[i + 1];
            rhs[i] = psi[i] - 0.5 * I * h * hpsi;
        }
        const cplx a = 0.5 * I * h * off;  // sub- and super-diagonal
        for (std::size_t i = 0; i < n; ++i) {
            const cplx b = 1.0 + 0.5 * I * h * diag[i];
            if (i == 0) {
                c_prime[i] = a / b;
                d_prime[i] = rhs[i] / b;
            } else {
                const cplx m = b - a * c_prime[i - 1];
                c_prime[i] = a / m;
                d_prime[i] = (rhs[i] - a * d_prime[i - 1]) / m;
            }
        }
        psi[n - 1] = d_prime[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) psi[i] = d_prime[i] - c_prime[i] * psi[i + 1];
    }
}

Eigen::Vector3cd rk4_three_level(const std::function<Eigen::Matrix3d(double)>& h, Eigen::Vector3cd c, double t0,
                                 double t1, double dt) {
    const auto steps = static_cast<std::size_t>(std::ceil((t1 - t0) / dt - 1e-9));
    const double step = (t1 - t0) / double(steps);
    const cplx mi(0.0, -1.0);
    auto f = [&](double t, const Eigen::Vector3cd& y) -> Eigen::Vector3cd { return mi * (h(t).cast<cplx>() * y); };
    for (std::size_t s = 0; s < steps; ++s) {
        const double t = t0 + double(s) * step;
        const Eigen::Vector3cd k1 = f(t, c);
        const Eigen::Vector3cd k2 = f(t + 0.5 * step, c + 0.5 * step * k1);
        const Eigen::Vector3cd k3 = f(t + 0.5 * step, c + 0.5 * step * k2);
        const Eigen::Vector3cd k4 = f(t + step, c + step * k3);
        c += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return c;
}

}  // namespace oracle
