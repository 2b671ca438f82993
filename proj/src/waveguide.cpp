#include "tlao/waveguide.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

#include "tlao/errors.hpp"
#include "tlao/fft.hpp"

namespace tlao {

double recoil_wavenumber(double omega_r) { return std::sqrt(2.0 * omega_r); }

void WavePacketSpec::validate() const {
    if (!(k_mean > 0.0)) throw ConfigError("packet.k_mean must be positive");
    if (!(k_spread > 0.0)) throw ConfigError("packet.k_spread must be positive");
    if (!(omega_r > 0.0)) throw ConfigError("packet.omega_r must be positive");
    if (!std::isfinite(y0)) throw ConfigError("packet.y0 must be finite");
}

WaveguideGeometry cpt_waveguide_geometry() {
    WaveguideGeometry geom;
    for (auto* pair : {&geom.profile.lm, &geom.profile.mr}) {
        pair->d_max = 6.0;
        pair->d_min = 1.5;
        pair->t_r = 65.0;
        pair->t_i = 0.0;
    }
    geom.profile.t_delay = 20.0;
    geom.profile.order = PulseOrder::Counterintuitive;
    geom.profile.ramp = RampShape::Cosine;
    geom.profile.separation = SeparationMode::Symmetric;
    geom.y_start = 0.0;
    return geom;
}

void Numerics2D::validate() const {
    x.validate();
    y.validate();
    if (!(dt > 0.0)) throw ConfigError("numerics.dt must be positive");
    if (!(absorber_width > 0.0) || !(absorber_strength > 0.0))
        throw ConfigError("numerics absorber width and strength must be positive");
    if (!(exit_gap >= 0.0) || !(entry_gap >= 0.0)) throw ConfigError("numerics plane gaps must be non-negative");
    if (!(clear_tolerance > 0.0)) throw ConfigError("numerics.clear_tolerance must be positive");
    if (!(t_max > 0.0)) throw ConfigError("numerics.t_max must be positive");
    if (!(norm_tolerance > 0.0)) throw ConfigError("numerics.norm_tolerance must be positive");
}

namespace {

/// Geometry of the longitudinal bookkeeping shared by both propagators.
struct Layout {
    double entry = 0.0;               ///< y below this counts as reflected
    double exit = 0.0;                ///< y at or above this counts as transmitted
    std::vector<double> absorber;     ///< W(y_j)
    std::vector<bool> low_margin;     ///< absorber rows at the low-y end
    std::size_t edge_rows = 1;        ///< outermost rows checked for margin breach

    Layout(const WaveguideGeometry& geom, const WavePacketSpec& packet, const Numerics2D& num) {
        entry = packet.y0 - num.entry_gap;
        exit = geom.y_end() + num.exit_gap;
        const double lo = num.y.x_min + num.absorber_width;
        const double hi = num.y.x_max - num.absorber_width;
        if (entry < lo || exit > hi)
            throw ConfigError("y grid too short: planes [" + std::to_string(entry) + ", " + std::to_string(exit) +
                              "] must lie inside the absorber-free window [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
        if (packet.y0 - 6.0 * packet.sigma_y() < lo)
            throw ConfigError("initial packet overlaps the low-y absorber");
        const double kmax = packet.k0() + 3.0 * packet.sigma_k();
        if (num.y.dx() > 0.25 * 2.0 * std::numbers::pi / kmax)
            throw ConfigError("y grid does not resolve the shortest longitudinal wavelength");
        const std::size_t ny = num.y.n;
        absorber.assign(ny, 0.0);
        low_margin.assign(ny, false);
        for (std::size_t j = 0; j < ny; ++j) {
            const double y = num.y.x(j);
            if (y < lo) {
                const double s = (lo - y) / num.absorber_width;
                absorber[j] = num.absorber_strength * s * s;
                low_margin[j] = true;
            } else if (y > hi) {
                const double s = (y - hi) / num.absorber_width;
                absorber[j] = num.absorber_strength * s * s;
            }
        }
        edge_rows = std::max<std::size_t>(1, static_cast<std::size_t>(0.1 * num.absorber_width / num.y.dx()));
    }
};

std::vector<cplx> longitudinal_packet(const Grid1D& y, const WavePacketSpec& packet) {
    const double s = packet.sigma_y();
    const double k0 = packet.k0();
    std::vector<cplx> g(y.n);
    double norm = 0.0;
    for (std::size_t j = 0; j < y.n; ++j) {
        const double u = y.x(j) - packet.y0;
        g[j] = std::polar(std::exp(-u * u / (4.0 * s * s)), k0 * y.x(j));
        norm += std::norm(g[j]);
    }
    const double scale = 1.0 / std::sqrt(norm * y.dx());
    for (auto& v : g) v *= scale;
    return g;
}

std::vector<double> centers_vec(const WaveguideGeometry& geom, double y) {
    const auto c = geom.centers(y);
    return {c.left, c.middle, c.right};
}

void record_sample(std::vector<PacketSample>& history, double t, std::span<const double> row_prob, const Grid1D& y,
                   const Layout& layout) {
    PacketSample s;
    s.t = t;
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < row_prob.size(); ++j) {
        const double yy = y.x(j);
        m0 += row_prob[j];
        m1 += row_prob[j] * yy;
        m2 += row_prob[j] * yy * yy;
        if (yy >= layout.entry && yy < layout.exit) s.inside += row_prob[j];
    }
    if (m0 > 0.0) {
        s.mean_y = m1 / m0;
        s.width_y = std::sqrt(std::max(0.0, m2 / m0 - s.mean_y * s.mean_y));
    }
    history.push_back(s);
}

void check_edges(std::span<const double> row_prob, const Layout& layout, double t) {
    const std::size_t n = row_prob.size();
    double edge = 0.0;
    for (std::size_t j = 0; j < layout.edge_rows; ++j) edge += row_prob[j] + row_prob[n - 1 - j];
    if (edge > 1e-6)
        throw NumericalIntegrityError("probability " + std::to_string(edge) + " reached the outer edge of an absorbing margin at t = " +
                                      std::to_string(t) + "; widen the margin or raise its strength");
}

/// Drives a propagator `advance(steps)` until the packet has cleared the planes.
/// `rows` returns the per-row probability; `finish` fills exit fractions.
template <typename Advance, typename Rows>
void drive(WaveguideResult& result, const Numerics2D& num, const Layout& layout, Advance&& advance, Rows&& rows,
           const std::function<void(double)>& snapshot) {
    const double h = num.dt;
    const auto check_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / h)));
    const auto sample_every = num.sample_interval > 0.0
                                  ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(num.sample_interval / h)))
                                  : 0;
    const auto snap_every = num.snapshot_interval > 0.0
                                ? std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(num.snapshot_interval / h)))
                                : 0;
    const auto max_steps = static_cast<std::size_t>(std::ceil(num.t_max / h));
    std::size_t step = 0;
    auto prob = rows();
    record_sample(result.history, 0.0, prob, num.y, layout);
    if (snap_every && snapshot) snapshot(0.0);
    while (true) {
        advance();
        ++step;
        const double t = double(step) * h;
        const bool sample = sample_every && step % sample_every == 0;
        if (step % check_every == 0 || sample) {
            prob = rows();
            check_edges(prob, layout, t);
            if (sample) record_sample(result.history, t, prob, num.y, layout);
            double inside = 0.0;
            for (std::size_t j = 0; j < prob.size(); ++j) {
                const double y = num.y.x(j);
                if (y >= layout.entry && y < layout.exit) inside += prob[j];
            }
            if (inside < num.clear_tolerance) {
                result.remaining = inside;
                result.cleared = true;
                break;
            }
        }
        if (snap_every && snapshot && step % snap_every == 0 && t <= num.snapshot_until) snapshot(t);
        if (step >= max_steps) {
            prob = rows();
            result.remaining = 0.0;
            for (std::size_t j = 0; j < prob.size(); ++j) {
                const double y = num.y.x(j);
                if (y >= layout.entry && y < layout.exit) result.remaining += prob[j];
            }
            break;
        }
    }
    result.steps = step;
    result.t_end = double(step) * h;
    if (snapshot && snap_every && result.t_end <= num.snapshot_until) snapshot(result.t_end);
}

}  // namespace

WaveguideResult propagate_2d(const WaveguideGeometry& geom, const WavePacketSpec& packet, const TrapParams& p,
                             const Numerics2D& num) {
    geom.validate();
    packet.validate();
    p.validate();
    num.validate();
    const Layout layout(geom, packet, num);
    const std::size_t nx = num.x.n, ny = num.y.n;
    const double dx = num.x.dx(), dy = num.y.dx(), h = num.dt;

    // Exit arms: x split at the midpoints between guide centres at the exit plane.
    const auto out = geom.centers(layout.exit);
    const double split_lm = 0.5 * (out.left + out.middle), split_mr = 0.5 * (out.middle + out.right);
    std::vector<std::size_t> arm(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = num.x.x(i);
        arm[i] = x < split_lm ? 0 : (x < split_mr ? 1 : 2);
    }

    // Initial state: entry-guide mode at y0 times the longitudinal packet.
    const auto basis0 = localized_basis_for(num.x, centers_vec(geom, packet.y0), p);
    const Eigen::VectorXd mode = basis0.orbitals.col(static_cast<Eigen::Index>(index(packet.entry)));
    const auto g = longitudinal_packet(num.y, packet);
    std::vector<cplx> psi(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) psi[j * nx + i] = g[j] * mode(static_cast<Eigen::Index>(i));

    // The structure is static: half-step potential factors are computed once.
    std::vector<cplx> half(nx * ny);
    const auto xs = num.x.points();
    std::vector<double> v(nx);
    for (std::size_t j = 0; j < ny; ++j) {
        const auto c = centers_vec(geom, num.y.x(j));
        sample_potential(xs, c, p, 0.0, v);
        const double damp = std::exp(-0.5 * layout.absorber[j] * h);
        for (std::size_t i = 0; i < nx; ++i) half[j * nx + i] = std::polar(damp, -0.5 * v[i] * h);
    }
    const auto kx = num.x.wavenumbers(), ky = num.y.wavenumbers();
    std::vector<cplx> kin_x(nx), kin_y(ny);
    const double inv = 1.0 / double(nx * ny);
    for (std::size_t i = 0; i < nx; ++i) kin_x[i] = std::polar(1.0, -0.5 * kx[i] * kx[i] * h);
    for (std::size_t j = 0; j < ny; ++j) kin_y[j] = std::polar(inv, -0.5 * ky[j] * ky[j] * h);
    FftPlan fft(ny, nx);

    std::array<double, 3> absorbed_arm{};
    double absorbed_low = 0.0;
    std::vector<std::size_t> margin_rows;
    for (std::size_t j = 0; j < ny; ++j)
        if (layout.absorber[j] > 0.0) margin_rows.push_back(j);

    auto potential_half = [&]() {
        for (const std::size_t j : margin_rows) {
            const double lost = 1.0 - std::exp(-layout.absorber[j] * h);
            const cplx* row = &psi[j * nx];
            if (layout.low_margin[j]) {
                double acc = 0.0;
                for (std::size_t i = 0; i < nx; ++i) acc += std::norm(row[i]);
                absorbed_low += lost * acc * dx * dy;
            } else {
                for (std::size_t i = 0; i < nx; ++i) absorbed_arm[arm[i]] += lost * std::norm(row[i]) * dx * dy;
            }
        }
        for (std::size_t k = 0; k < psi.size(); ++k) psi[k] *= half[k];
    };
    auto advance = [&]() {
        potential_half();
        fft.forward(psi);
        for (std::size_t j = 0; j < ny; ++j) {
            cplx* row = &psi[j * nx];
            const cplx f = kin_y[j];
            for (std::size_t i = 0; i < nx; ++i) row[i] *= f * kin_x[i];
        }
        fft.backward(psi);
        potential_half();
    };
    auto rows = [&]() {
        std::vector<double> prob(ny);
        for (std::size_t j = 0; j < ny; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < nx; ++i) acc += std::norm(psi[j * nx + i]);
            prob[j] = acc * dx * dy;
        }
        return prob;
    };

    WaveguideResult result;
    std::function<void(double)> snap;
    if (num.snapshot) snap = [&](double t) { num.snapshot(t, psi); };

    double worst_drift = 0.0;
    std::size_t counter = 0;
    auto advance_checked = [&]() {
        advance();
        if (++counter % 64 == 0) {
            double total = absorbed_low + absorbed_arm[0] + absorbed_arm[1] + absorbed_arm[2];
            for (const auto& a : psi) total += std::norm(a) * dx * dy;
            const double drift = std::abs(total - 1.0);
            worst_drift = std::max(worst_drift, drift);
            if (!(drift <= num.norm_tolerance))
                throw NumericalIntegrityError("2D norm bookkeeping drift " + std::to_string(drift));
        }
    };
    drive(result, num, layout, advance_checked, rows, snap);

    double total = absorbed_low + absorbed_arm[0] + absorbed_arm[1] + absorbed_arm[2];
    std::array<double, 3> past_exit{};
    double behind = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const double y = num.y.x(j);
        for (std::size_t i = 0; i < nx; ++i) {
            const double w = std::norm(psi[j * nx + i]) * dx * dy;
            total += w;
            if (y >= layout.exit) past_exit[arm[i]] += w;
            else if (y < layout.entry) behind += w;
        }
    }
    result.max_norm_drift = std::max(worst_drift, std::abs(total - 1.0));
    result.exits.f_L = absorbed_arm[0] + past_exit[0];
    result.exits.f_M = absorbed_arm[1] + past_exit[1];
    result.exits.f_R = absorbed_arm[2] + past_exit[2];
    result.exits.f_reflected = absorbed_low + behind;
    return result;
}

ChannelTables mode_decomposition(const WaveguideGeometry& geom, const TrapParams& p, const Grid1D& x,
                                 const Grid1D& y) {
    geom.validate();
    x.validate();
    const std::size_t ny = y.n;
    const double dx = x.dx(), dy = y.dx();
    std::vector<Eigen::MatrixXd> modes(ny);
    ChannelTables tables;
    tables.y = y.points();
    tables.H.resize(ny);
    tables.K.assign(ny, Eigen::Matrix3d::Zero());
    tables.P.assign(ny, Eigen::Matrix3d::Zero());

    for (std::size_t j = 0; j < ny; ++j) {
        const auto basis = localized_basis_for(x, centers_vec(geom, y.x(j)), p);
        modes[j] = basis.orbitals;
        tables.H[j] = basis.site_hamiltonian;
        if (j == 0) continue;
        for (Eigen::Index a = 0; a < 3; ++a) {
            const double o = modes[j].col(a).dot(modes[j - 1].col(a)) * dx;
            if (std::abs(o) < 0.5)
                throw BasisUnresolved("transverse mode " + std::to_string(a) + " changes character between y = " +
                                      std::to_string(y.x(j - 1)) + " and y = " + std::to_string(y.x(j)));
            if (o < 0.0) {
                modes[j].col(a) *= -1.0;
                tables.H[j].row(a) *= -1.0;
                tables.H[j].col(a) *= -1.0;
            }
        }
    }
    for (std::size_t j = 1; j + 1 < ny; ++j) {
        // <a_j|b_{j+1}> - <a_{j+1}|b_j> over 2 dy, averaged with the backward pair: a centred
        // difference that keeps K exactly antisymmetric. The plain form -<a_j|b_{j+1} - b_{j-1}>
        // picks up a ~1e-5 symmetric residue where the potential cusp between guides crosses x samples.
        const Eigen::Matrix3d fwd = modes[j].transpose() * modes[j + 1] * dx;
        const Eigen::Matrix3d bwd = modes[j].transpose() * modes[j - 1] * dx;
        const Eigen::MatrixXd d2 = (modes[j + 1] - 2.0 * modes[j] + modes[j - 1]) / (dy * dy);
        tables.K[j] = -(fwd - fwd.transpose() - bwd + bwd.transpose()) / (4.0 * dy);
        tables.P[j] = -(modes[j].transpose() * d2) * dx;
    }
    return tables;
}

WaveguideResult propagate_channels(const ChannelTables& tables, const WaveguideGeometry& geom,
                                   const WavePacketSpec& packet, const Numerics2D& num) {
    packet.validate();
    num.validate();
    const Layout layout(geom, packet, num);
    const std::size_t ny = num.y.n;
    if (tables.y.size() != ny) throw ConfigError("channel tables do not match the y grid");
    const double dy = num.y.dx(), h = num.dt;
    using Mat3c = Eigen::Matrix3cd;
    using Mat6c = Eigen::Matrix<cplx, 6, 6>;
    using Mat6d = Eigen::Matrix<double, 6, 6>;
    const cplx I(0.0, 1.0);

    // CFL-style guard on the explicit first-derivative coupling.
    double kmax = 0.0;
    for (const auto& k : tables.K) kmax = std::max(kmax, k.cwiseAbs().maxCoeff());
    if (kmax * h / dy > 0.5)
        throw NumericalIntegrityError("dt too large for the derivative coupling: |K| dt / dy = " +
                                      std::to_string(kmax * h / dy));

    std::vector<Mat3c> local(ny);
    for (std::size_t j = 0; j < ny; ++j) {
        const Eigen::Matrix3d psym = 0.5 * (tables.P[j] + tables.P[j].transpose());
        const Eigen::Matrix3d g = 0.5 * (tables.H[j] + tables.H[j].transpose()) + 0.5 * psym;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
        Eigen::Vector3cd phase;
        for (int a = 0; a < 3; ++a) phase(a) = std::exp(-I * 0.5 * h * es.eigenvalues()(a));
        local[j] = es.eigenvectors().cast<cplx>() * phase.asDiagonal() * es.eigenvectors().transpose().cast<cplx>();
        local[j] *= std::exp(-0.5 * layout.absorber[j] * h);
    }
    // Bond (j, j+1) carries B = (K_j + K_{j+1}) / (4 dy) between c_j and c_{j+1}.
    std::vector<Mat6c> bond(ny > 0 ? ny - 1 : 0);
    std::vector<bool> active(bond.size(), false);
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        const Eigen::Matrix3d ka = 0.5 * (tables.K[j] - tables.K[j].transpose());
        const Eigen::Matrix3d kb = 0.5 * (tables.K[j + 1] - tables.K[j + 1].transpose());
        const Eigen::Matrix3d b = (ka + kb) / (4.0 * dy);
        if (b.cwiseAbs().maxCoeff() == 0.0) continue;
        Mat6d m = Mat6d::Zero();
        m.topRightCorner<3, 3>() = b;
        m.bottomLeftCorner<3, 3>() = b.transpose();
        Eigen::SelfAdjointEigenSolver<Mat6d> es(m);
        Eigen::Matrix<cplx, 6, 1> phase;
        for (int a = 0; a < 6; ++a) phase(a) = std::exp(-I * 0.5 * h * es.eigenvalues()(a));
        bond[j] = es.eigenvectors().cast<cplx>() * phase.asDiagonal() * es.eigenvectors().transpose().cast<cplx>();
        active[j] = true;
    }

    std::array<std::vector<cplx>, 3> c;
    for (auto& ch : c) ch.assign(ny, cplx(0.0));
    c[index(packet.entry)] = longitudinal_packet(num.y, packet);

    const auto ky = num.y.wavenumbers();
    std::vector<cplx> kin(ny);
    for (std::size_t j = 0; j < ny; ++j) kin[j] = std::polar(1.0 / double(ny), -0.5 * ky[j] * ky[j] * h);
    FftPlan fft(ny);

    std::array<double, 3> absorbed_arm{};
    double absorbed_low = 0.0;

    auto apply_local = [&]() {
        for (std::size_t j = 0; j < ny; ++j) {
            Eigen::Vector3cd v(c[0][j], c[1][j], c[2][j]);
            if (layout.absorber[j] > 0.0) {
                const double lost = 1.0 - std::exp(-layout.absorber[j] * h);
                if (layout.low_margin[j]) {
                    absorbed_low += lost * v.squaredNorm() * dy;
                } else {
                    for (int a = 0; a < 3; ++a) absorbed_arm[static_cast<std::size_t>(a)] += lost * std::norm(v(a)) * dy;
                }
            }
            v = local[j] * v;
            for (int a = 0; a < 3; ++a) c[static_cast<std::size_t>(a)][j] = v(a);
        }
    };
    auto apply_bonds = [&](std::size_t parity) {
        for (std::size_t j = parity; j + 1 < ny; j += 2) {
            if (!active[j]) continue;
            Eigen::Matrix<cplx, 6, 1> v;
            for (int a = 0; a < 3; ++a) {
                v(a) = c[static_cast<std::size_t>(a)][j];
                v(a + 3) = c[static_cast<std::size_t>(a)][j + 1];
            }
            v = bond[j] * v;
            for (int a = 0; a < 3; ++a) {
                c[static_cast<std::size_t>(a)][j] = v(a);
                c[static_cast<std::size_t>(a)][j + 1] = v(a + 3);
            }
        }
    };
    auto advance = [&]() {
        apply_local();
        apply_bonds(0);
        apply_bonds(1);
        for (auto& ch : c) {
            fft.forward(ch);
            for (std::size_t j = 0; j < ny; ++j) ch[j] *= kin[j];
            fft.backward(ch);
        }
        apply_bonds(1);
        apply_bonds(0);
        apply_local();
    };
    auto rows = [&]() {
        std::vector<double> prob(ny);
        for (std::size_t j = 0; j < ny; ++j)
            prob[j] = (std::norm(c[0][j]) + std::norm(c[1][j]) + std::norm(c[2][j])) * dy;
        return prob;
    };

    WaveguideResult result;
    double worst_drift = 0.0;
    std::size_t counter = 0;
    auto advance_checked = [&]() {
        advance();
        if (++counter % 64 == 0) {
            double total = absorbed_low + absorbed_arm[0] + absorbed_arm[1] + absorbed_arm[2];
            for (const auto& ch : c)
                for (const auto& a : ch) total += std::norm(a) * dy;
            const double drift = std::abs(total - 1.0);
            worst_drift = std::max(worst_drift, drift);
            if (!(drift <= num.norm_tolerance))
                throw NumericalIntegrityError("channel norm bookkeeping drift " + std::to_string(drift));
        }
    };
    drive(result, num, layout, advance_checked, rows, {});

    double total = absorbed_low + absorbed_arm[0] + absorbed_arm[1] + absorbed_arm[2];
    std::array<double, 3> past_exit{};
    double behind = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const double y = num.y.x(j);
        for (std::size_t a = 0; a < 3; ++a) {
            const double w = std::norm(c[a][j]) * dy;
            total += w;
            if (y >= layout.exit) past_exit[a] += w;
            else if (y < layout.entry) behind += w;
        }
    }
    result.max_norm_drift = std::max(worst_drift, std::abs(total - 1.0));
    result.exits.f_L = absorbed_arm[0] + past_exit[0];
    result.exits.f_M = absorbed_arm[1] + past_exit[1];
    result.exits.f_R = absorbed_arm[2] + past_exit[2];
    result.exits.f_reflected = absorbed_low + behind;
    return result;
}

void write_exit_csv(std::ostream& os, const std::vector<std::pair<double, ExitFractions>>& rows) {
    os << "parameter,f_L,f_M,f_R,f_reflected\n" << std::setprecision(12);
    for (const auto& [param, f] : rows)
        os << param << ',' << f.f_L << ',' << f.f_M << ',' << f.f_R << ',' << f.f_reflected << '\n';
}

}  // namespace tlao
