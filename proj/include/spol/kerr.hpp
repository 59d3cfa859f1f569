#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "spol/constants.hpp"
#include "spol/errors.hpp"
#include "spol/media.hpp"
#include "spol/numerics.hpp"

/// Cross-Kerr coefficient of two co-propagating surface polaritons coupled
/// through a thin layer of double-EIT atoms at the interface, the resulting
/// mutual phase shift phi = chi * omega * L / v_g, the frequency omega_pi
/// where phi = pi, and the chi/phi sweep data.
///
/// chi(omega) is assembled as
///   chi = eta * u0 * [2 pi n z0 f(x) / (hbar^4 v_g |Omega_c|^2 Delta)]
///         * (|d24|^2 |d26|^2 / 9) * I_bare(omega)^2 * V_mode(omega)
/// with
///   f(x)      = (1 - e^(-2x)) / (2x), the layer-average phase-mismatch
///               suppression, evaluated at x = |k_a + k_b - k_c| z0,
///               k_a = k_b = Re K(omega), k_c the control-field wavenumber;
///   I_bare    = hbar omega / (2 eps0 eps1 A_eff L_quant), the squared
///               single-photon field amplitude of a mode of cross-section
///               A_eff = w / |k_perp| and quantization length L_quant;
///   V_mode    = A_eff * L_quant, the quantization volume (renders the
///               atom-number sum dimensionless);
///   u0        = shipped calibration constant, fixed once so that
///               phi(1.24 * omega0) = pi on the reference preset with
///               L = 1 mm (the field normalization is defined only up to
///               this single transverse-profile overlap factor);
///   eta       = user calibration multiplier (default 1), entering chi
///               linearly so that omega_pi is invariant under
///               eta -> s*eta, L -> L/s.
/// The 1/9 is isotropic orientation averaging, 1/3 per dipole factor.

namespace spol::kerr {

/// Shipped single-constant calibration (see module comment). Computed once
/// for the reference preset and frozen.
inline constexpr double pair_field_calibration = 7.778184509773834e-07;

struct AtomicLayer {
  double n = 0.0;             ///< atomic number density, m^-3
  double z0 = 0.0;            ///< layer thickness, m
  double omega_c_rabi = 0.0;  ///< control-field Rabi frequency, rad/s
  double delta = 0.0;         ///< detuning, rad/s
  double d24 = 0.0;           ///< dipole matrix element |d24|, C*m
  double d26 = 0.0;           ///< dipole matrix element |d26|, C*m
  double k_c = 0.0;           ///< control-field wavenumber, m^-1
  double lambda_transition = 0.0;  ///< atomic transition wavelength, m

  void validate() const {
    auto need_positive = [](double v, const char* key) {
      if (!(v > 0.0)) {
        throw BadAtomicParams(std::string("layer.") + key + ": must be > 0, got " +
                              std::to_string(v));
      }
    };
    need_positive(n, "n");
    need_positive(z0, "z0");
    need_positive(omega_c_rabi, "omega_c_rabi");
    need_positive(delta, "delta");
    need_positive(d24, "d24");
    need_positive(d26, "d26");
    need_positive(k_c, "k_c");
    need_positive(lambda_transition, "lambda_transition");
  }
};

struct FieldNormalization {
  double width = 0.0;         ///< transverse mode width w, m
  double quant_length = 0.0;  ///< quantization length along propagation, m
  double eta = 1.0;           ///< dimensionless calibration multiplier

  void validate() const {
    if (!(width > 0.0)) throw BadConfig("normalization.width: must be > 0");
    if (!(quant_length > 0.0)) throw BadConfig("normalization.quant_length: must be > 0");
    if (!(eta > 0.0)) throw BadConfig("normalization.eta: must be > 0");
  }
};

/// One row of the chi/phi sweep; phi = chi*omega*L/v_g holds exactly by
/// construction for valid points.
struct KerrPoint {
  double omega = 0.0;
  double chi = 0.0;   ///< dimensionless Kerr coefficient
  double phi = 0.0;   ///< mutual phase shift, rad
  double v_g = 0.0;   ///< m/s
  double xi = 0.0;    ///< confinement length 1/Re k_perp, m
  bool valid = false;
  std::string diagnostic;
};

/// Layer-average suppression factor f[x] = (e^-x sinh x)/x = (1 - e^(-2x))/(2x),
/// continuous limit f(0) = 1. Defined for x >= 0 only.
[[nodiscard]] inline double geometry_factor(double x) {
  if (x < 0.0) {
    throw NegativeArgument("geometry_factor: x must be >= 0, got " + std::to_string(x));
  }
  if (x == 0.0) return 1.0;
  return -std::expm1(-2.0 * x) / (2.0 * x);
}

/// Transverse mode extent used by the field normalization: 1/|k_perp|.
/// Finite through the weak-binding crossover, unlike 1/Re k_perp.
[[nodiscard]] inline double normalization_extent(const media::SurfaceMode& mode) {
  const double kp = std::abs(mode.k_perp);
  if (!(kp > 0.0) || !std::isfinite(kp)) {
    throw Unconfined("single_photon_intensity: |k_perp| = 0, mode has no transverse scale");
  }
  return 1.0 / kp;
}

/// Squared single-photon field amplitude |E0|^2 = eta*hbar*omega /
/// (2 eps0 eps1 A_eff L_quant) with A_eff = (1/|k_perp|) * width, in V^2/m^2.
[[nodiscard]] inline double single_photon_intensity(const media::SurfaceMode& mode,
                                                    const media::Dielectric& diel,
                                                    const FieldNormalization& norm) {
  norm.validate();
  media::require_positive_frequency(mode.omega, "single_photon_intensity");
  const double a_eff = normalization_extent(mode) * norm.width;
  return norm.eta * constants::hbar * mode.omega /
         (2.0 * constants::eps0 * diel.eps1 * a_eff * norm.quant_length);
}

namespace detail {

/// chi from precomputed mode quantities; single code path shared by
/// kerr_coefficient, find_pi_frequency and fig3_sweep so the stored v_g and
/// the one inside chi are bit-identical.
[[nodiscard]] inline double chi_from_mode(const media::Dielectric& diel,
                                          const AtomicLayer& layer,
                                          const FieldNormalization& norm, double omega,
                                          const media::cplx& K, const media::cplx& k_perp,
                                          double v_g) {
  const double kp_mag = std::abs(k_perp);
  if (!(kp_mag > 0.0) || !std::isfinite(kp_mag)) {
    throw Unconfined("kerr_coefficient: |k_perp| = 0 at omega = " + std::to_string(omega));
  }
  if (!(K.real() > 0.0)) {
    throw BadDispersion("kerr_coefficient: Re K <= 0 at omega = " + std::to_string(omega));
  }
  const double x = std::abs(2.0 * K.real() - layer.k_c) * layer.z0;
  const double f = geometry_factor(x);
  const double xi_n = 1.0 / kp_mag;
  const double a_eff = xi_n * norm.width;
  const double v_mode = a_eff * norm.quant_length;
  const double i_bare = constants::hbar * omega /
                        (2.0 * constants::eps0 * diel.eps1 * a_eff * norm.quant_length);
  const double orientation_avg =
      layer.d24 * layer.d24 * layer.d26 * layer.d26 / 9.0 * i_bare * i_bare;
  const double h4 = constants::hbar * constants::hbar * constants::hbar * constants::hbar;
  const double prefactor = 2.0 * constants::pi * layer.n * layer.z0 * f /
                           (h4 * v_g * layer.omega_c_rabi * layer.omega_c_rabi * layer.delta);
  return norm.eta * pair_field_calibration * prefactor * orientation_avg * v_mode;
}

}  // namespace detail

/// Dimensionless cross-Kerr coefficient chi(omega); see module comment.
[[nodiscard]] inline double kerr_coefficient(const media::Interface& i,
                                             const AtomicLayer& layer,
                                             const FieldNormalization& norm, double omega) {
  layer.validate();
  norm.validate();
  const media::cplx K = media::surface_wavevector(i, omega);
  const media::cplx kp = media::transverse_wavevector(i, omega);
  const double v_g = media::group_velocity(i, omega);
  return detail::chi_from_mode(i.dielectric, layer, norm, omega, K, kp, v_g);
}

/// Mutual phase shift phi = chi * omega * L / v_g accumulated over length L.
[[nodiscard]] inline double phase_shift(double chi, double omega, double L, double v_g) {
  if (!(L > 0.0)) throw BadGeometry("phase_shift: L must be > 0, got " + std::to_string(L));
  if (!(v_g > 0.0)) {
    throw BadGeometry("phase_shift: v_g must be > 0, got " + std::to_string(v_g));
  }
  return chi * omega * L / v_g;
}

/// Frequency omega_pi where phi(omega) = pi, located inside the bracket.
[[nodiscard]] inline double find_pi_frequency(const media::Interface& i,
                                              const AtomicLayer& layer,
                                              const FieldNormalization& norm, double L,
                                              num::Bracket bracket,
                                              num::RootOptions opt = {}) {
  auto phi_minus_pi = [&](double w) {
    const double chi = kerr_coefficient(i, layer, norm, w);
    return phase_shift(chi, w, L, media::group_velocity(i, w)) - constants::pi;
  };
  try {
    return num::find_root(phi_minus_pi, bracket, opt).x;
  } catch (const NoSignChange&) {
    throw NoSignChange("find_pi_frequency: phi does not reach pi in bracket [" +
                       std::to_string(bracket.lo) + ", " + std::to_string(bracket.hi) + "]");
  }
}

/// One KerrPoint per grid frequency; bad points are flagged, never abort the sweep.
[[nodiscard]] inline std::vector<KerrPoint> fig3_sweep(const media::Interface& i,
                                                       const AtomicLayer& layer,
                                                       const FieldNormalization& norm,
                                                       double L,
                                                       const std::vector<double>& grid) {
  layer.validate();
  norm.validate();
  std::vector<KerrPoint> out;
  out.reserve(grid.size());
  for (const double omega : grid) {
    KerrPoint p;
    p.omega = omega;
    const media::SurfaceMode mode = media::mode_report(i, omega);
    if (!mode.valid) {
      p.diagnostic = mode.diagnostic;
      out.push_back(p);
      continue;
    }
    try {
      p.chi = detail::chi_from_mode(i.dielectric, layer, norm, omega, mode.K, mode.k_perp,
                                    mode.v_g);
      p.phi = phase_shift(p.chi, omega, L, mode.v_g);
      p.v_g = mode.v_g;
      p.xi = mode.xi;
      p.valid = std::isfinite(p.chi) && std::isfinite(p.phi) && std::isfinite(p.xi);
      if (!p.valid) p.diagnostic = "non-finite chi/phi/xi";
    } catch (const Error& e) {
      p.valid = false;
      p.diagnostic = std::string(e.type()) + ": " + e.what();
    }
    out.push_back(p);
  }
  return out;
}

/// Reference atomic layer (87Rb-like values of the shipped configuration).
[[nodiscard]] inline AtomicLayer paper_2012_layer() {
  AtomicLayer layer;
  layer.n = 2e20;
  layer.z0 = 2e-6;
  layer.omega_c_rabi = 2.0 * constants::pi * 1e6;
  layer.delta = 2.0 * constants::pi * 1.4e6;
  layer.d24 = 5.0 * constants::ea0;
  layer.d26 = 5.0 * constants::ea0;
  layer.lambda_transition = 780e-9;
  layer.k_c = 2.0 * constants::pi / 780e-9;
  return layer;
}

/// Reference field normalization (width 2 um, quantization length 1 mm, eta 1).
[[nodiscard]] inline FieldNormalization paper_2012_normalization() {
  return {2e-6, 1e-3, 1.0};
}

}  // namespace spol::kerr
