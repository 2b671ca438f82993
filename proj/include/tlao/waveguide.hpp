#pragma once

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tlao/grid.hpp"
#include "tlao/potentials.hpp"
#include "tlao/spectral.hpp"

namespace tlao {

using cplx = std::complex<double>;

/// Recoil wavenumber k_r = sqrt(2 omega_r) (hbar = m = omega_x = 1).
double recoil_wavenumber(double omega_r);

/// Gaussian packet in y times the transverse ground mode of the entry guide.
struct WavePacketSpec {
    double k_mean = 3.5;           ///< <k_y> in units of k_r
    double k_spread = 1.0;         ///< rms momentum spread in units of k_r
    double omega_r = 1.0 / 6.0;
    Site entry = Site::Left;
    double y0 = -15.0;             ///< initial packet centre

    double k_r() const { return recoil_wavenumber(omega_r); }
    double k0() const { return k_mean * k_r(); }
    double sigma_k() const { return k_spread * k_r(); }
    /// rms width of |psi|^2 along y at t = 0.
    double sigma_y() const { return 0.5 / sigma_k(); }

    void validate() const;
};

/// Three guides, d_max = 6, d_min = 1.5, ramp length 65, delay 20, MR pair first,
/// symmetric separation: splits a packet entering the left guide between L and R.
WaveguideGeometry cpt_waveguide_geometry();

struct Numerics2D {
    Grid1D x{-16.0, 16.0, 256};
    Grid1D y{-70.0, 240.0, 2048};
    double dt = 0.05;
    double absorber_width = 40.0;     ///< imaginary potential ramps in over this length at both y ends
    double absorber_strength = 2.0;   ///< W = strength * s^2, s in [0, 1] across the margin
    double exit_gap = 10.0;           ///< exit plane sits this far past the end of the structure
    double entry_gap = 10.0;          ///< reflection plane sits this far behind the initial packet
    double clear_tolerance = 1e-3;    ///< stop once this little probability is left between the planes
    double t_max = 2000.0;
    double sample_interval = 5.0;
    double norm_tolerance = 1e-6;
    double snapshot_interval = 0.0;
    double snapshot_until = 1e300;    ///< no snapshots after this time
    /// Receives (t, field) with the field laid out y-major (x fastest).
    std::function<void(double, std::span<const cplx>)> snapshot;

    void validate() const;
};

struct ExitFractions {
    double f_L = 0.0;
    double f_M = 0.0;
    double f_R = 0.0;
    double f_reflected = 0.0;

    double sum() const { return f_L + f_M + f_R + f_reflected; }
};

struct PacketSample {
    double t = 0.0;
    double inside = 0.0;   ///< probability between the entry and exit planes
    double mean_y = 0.0;
    double width_y = 0.0;  ///< rms width of the unabsorbed density along y
};

struct WaveguideResult {
    ExitFractions exits;
    std::vector<PacketSample> history;
    double t_end = 0.0;
    std::size_t steps = 0;
    double remaining = 0.0;        ///< probability still between the planes at t_end
    bool cleared = false;          ///< remaining fell below the clear tolerance before t_max
    double max_norm_drift = 0.0;   ///< |norm + absorbed - 1|
};

/// Full 2D split-step propagation through `geom` until the packet has cleared the
/// structure. Exit arms are assigned by x relative to the midpoints between the
/// guide centres at the exit plane. Stops once the packet has cleared or at t_max
/// (see `cleared`). Throws NumericalIntegrityError if probability reaches the outer
/// edge of an absorbing margin.
WaveguideResult propagate_2d(const WaveguideGeometry& geom, const WavePacketSpec& packet, const TrapParams& p,
                             const Numerics2D& num = {});

/// Transverse-mode tables along y: H_ab = <a|H_x|b>, K_ab = -<a|d_y b>, P_ab = -<a|d_y^2 b>.
struct ChannelTables {
    std::vector<double> y;
    std::vector<Eigen::Matrix3d> H, K, P;
};

/// Localised transverse modes at each y with sign continuity enforced along y;
/// derivatives by centred differences, K in a form that is antisymmetric by construction. Throws BasisUnresolved when a slice cannot
/// be localised or a mode changes character between neighbouring slices.
ChannelTables mode_decomposition(const WaveguideGeometry& geom, const TrapParams& p, const Grid1D& x,
                                 const Grid1D& y);

/// Integrates i dc/dt = -c''/2 + (H + P_s/2) c + (K c' + (K c)')/2 on the y grid of
/// `num`, where P_s is the symmetric part of P (the form that follows from the mode
/// expansion and keeps the generator Hermitian). Exit fractions are read per channel.
WaveguideResult propagate_channels(const ChannelTables& tables, const WaveguideGeometry& geom,
                                   const WavePacketSpec& packet, const Numerics2D& num = {});

/// Header `parameter,f_L,f_M,f_R,f_reflected`.
void write_exit_csv(std::ostream& os, const std::vector<std::pair<double, ExitFractions>>& rows);

}  // namespace tlao
