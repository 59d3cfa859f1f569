#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "spol/constants.hpp"
#include "spol/errors.hpp"
#include "spol/numerics.hpp"

/// Material response and TM surface-mode dispersion at a dielectric /
/// negative-index-metamaterial interface.
///
/// The metamaterial follows Drude-type models
///   eps2(w) = eps_inf - omega_e^2 / (w (w + i gamma_e))
///   mu2(w)  = mu_inf  - omega_m^2 / (w (w + i gamma_m))
/// and the TM surface mode obeys
///   K(w) = (w/c) sqrt( eps1 eps2 (eps2 mu1 - eps1 mu2) / (eps2^2 - eps1^2) ).
/// Re K is the dispersion, Im K the absorption loss; the zero-loss frequency
/// omega0 is where Im K vanishes. The transverse decay constant is
///   k_perp(w) = sqrt(K^2 - w^2 eps1 mu1 / c^2),
/// confinement xi = 1/Re k_perp, group velocity v_g = (d Re K/dw)^-1.

namespace spol::media {

using cplx = std::complex<double>;

struct DrudeMedium {
  double eps_inf = 0.0;
  double mu_inf = 0.0;
  double omega_e = 0.0;  ///< electric plasma frequency, s^-1
  double gamma_e = 0.0;  ///< electric damping rate, s^-1
  double omega_m = 0.0;  ///< magnetic plasma frequency, s^-1
  double gamma_m = 0.0;  ///< magnetic damping rate, s^-1

  void validate() const {
    if (!(omega_e > 0.0)) throw BadConfig("medium.omega_e: must be > 0");
    if (omega_m < 0.0) throw BadConfig("medium.omega_m: must be >= 0");
    if (gamma_e < 0.0) throw BadConfig("medium.gamma_e: must be >= 0");
    if (gamma_m < 0.0) throw BadConfig("medium.gamma_m: must be >= 0");
    if (!(eps_inf > 0.0)) throw BadConfig("medium.eps_inf: must be > 0");
    if (!(mu_inf > 0.0)) throw BadConfig("medium.mu_inf: must be > 0");
  }
};

struct Dielectric {
  double eps1 = 0.0;
  double mu1 = 0.0;

  void validate() const {
    if (!(eps1 > 0.0)) throw BadConfig("dielectric.eps1: must be > 0");
    if (!(mu1 > 0.0)) throw BadConfig("dielectric.mu1: must be > 0");
  }
};

struct Interface {
  Dielectric dielectric;
  DrudeMedium metamaterial;

  void validate() const {
    dielectric.validate();
    metamaterial.validate();
  }
};

/// Aggregated single-frequency mode description. `valid` is false (with a
/// diagnostic) instead of throwing when the mode is unbound or an upstream
/// evaluation failed.
struct SurfaceMode {
  double omega = 0.0;
  cplx K{0.0, 0.0};
  cplx k_perp{0.0, 0.0};
  double xi = 0.0;   ///< confinement length 1/Re k_perp, m
  double v_g = 0.0;  ///< group velocity, m/s
  bool valid = false;
  std::string diagnostic;
};

inline void require_positive_frequency(double omega, const char* where) {
  if (!(omega > 0.0)) {
    throw BadFrequency(std::string(where) + ": frequency must be > 0, got " +
                       std::to_string(omega));
  }
}

[[nodiscard]] inline cplx permittivity(const DrudeMedium& m, double omega) {
  require_positive_frequency(omega, "permittivity");
  return cplx(m.eps_inf, 0.0) -
         m.omega_e * m.omega_e / (omega * cplx(omega, m.gamma_e));
}

[[nodiscard]] inline cplx permeability(const DrudeMedium& m, double omega) {
  require_positive_frequency(omega, "permeability");
  return cplx(m.mu_inf, 0.0) -
         m.omega_m * m.omega_m / (omega * cplx(omega, m.gamma_m));
}

/// Radicand of the TM dispersion relation: eps1 eps2 (eps2 mu1 - eps1 mu2) / (eps2^2 - eps1^2).
[[nodiscard]] inline cplx dispersion_radicand(const Interface& i, double omega) {
  const double eps1 = i.dielectric.eps1;
  const double mu1 = i.dielectric.mu1;
  const cplx eps2 = permittivity(i.metamaterial, omega);
  const cplx mu2 = permeability(i.metamaterial, omega);
  const cplx denom = eps2 * eps2 - eps1 * eps1;
  if (std::abs(denom) < 1e-12 * eps1 * eps1) {
    throw DegenerateDenominator(
        "surface_wavevector: |eps2^2 - eps1^2| degenerate at omega = " +
        std::to_string(omega));
  }
  return eps1 * eps2 * (eps2 * mu1 - eps1 * mu2) / denom;
}

/// Complex in-plane wavevector K(omega) on the branch with Re K >= 0.
[[nodiscard]] inline cplx surface_wavevector(const Interface& i, double omega) {
  require_positive_frequency(omega, "surface_wavevector");
  const cplx root =
      num::complex_sqrt_branch(dispersion_radicand(i, omega), num::BranchRule::nonneg_real_part);
  return (omega / constants::c0) * root;
}

/// Complex transverse wavevector k_perp(omega) on the branch with Re k_perp >= 0,
/// so a bound mode decays into the dielectric.
[[nodiscard]] inline cplx transverse_wavevector(const Interface& i, double omega) {
  const cplx K = surface_wavevector(i, omega);
  const double k1 = omega / constants::c0;
  const cplx arg = K * K - cplx(k1 * k1 * i.dielectric.eps1 * i.dielectric.mu1, 0.0);
  return num::complex_sqrt_branch(arg, num::BranchRule::nonneg_real_part);
}

/// Confinement length xi = 1/Re k_perp of the bound mode.
[[nodiscard]] inline double confinement(const Interface& i, double omega) {
  const cplx kp = transverse_wavevector(i, omega);
  if (!(kp.real() > 0.0)) {
    throw Unconfined("confinement: Re k_perp <= 0 at omega = " + std::to_string(omega) +
                     " (mode not bound to the interface)");
  }
  return 1.0 / kp.real();
}

/// Group velocity v_g = (d Re K / d omega)^-1 by central difference.
[[nodiscard]] inline double group_velocity(const Interface& i, double omega) {
  require_positive_frequency(omega, "group_velocity");
  double slope = 0.0;
  try {
    slope = num::central_derivative(
        [&i](double w) { return surface_wavevector(i, w).real(); }, omega);
  } catch (const NonFinite& e) {
    throw BadDispersion(std::string("group_velocity: ") + e.what());
  }
  if (!std::isfinite(slope) || slope <= 0.0) {
    throw BadDispersion(
        "group_velocity: non-positive or non-finite d Re K/d omega at omega = " +
        std::to_string(omega) + " (branch jump inside the stencil?)");
  }
  return 1.0 / slope;
}

/// Zero-loss frequency omega0: the strict sign change of Im K inside the bracket.
[[nodiscard]] inline double find_zero_loss(const Interface& i, num::Bracket bracket,
                                           num::RootOptions opt = {}) {
  auto im_k = [&i](double w) { return surface_wavevector(i, w).imag(); };
  const double flo = im_k(bracket.lo);
  const double fhi = im_k(bracket.hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw NonFinite("find_zero_loss: Im K not finite at a bracket endpoint");
  }
  if (!(flo * fhi < 0.0)) {
    throw NoSignChange("find_zero_loss: Im K does not cross zero in bracket [" +
                       std::to_string(bracket.lo) + ", " + std::to_string(bracket.hi) + "]");
  }
  return num::find_root(im_k, bracket, opt).x;
}

/// Fills every SurfaceMode field; never throws. Errors and unbound modes are
/// reported through `valid` and `diagnostic`.
[[nodiscard]] inline SurfaceMode mode_report(const Interface& i, double omega) {
  SurfaceMode mode;
  mode.omega = omega;
  try {
    mode.K = surface_wavevector(i, omega);
    mode.k_perp = transverse_wavevector(i, omega);
    mode.xi = (mode.k_perp.real() > 0.0) ? 1.0 / mode.k_perp.real()
                                         : std::numeric_limits<double>::infinity();
    mode.v_g = group_velocity(i, omega);
    if (!(mode.K.real() > 0.0)) {
      mode.diagnostic = "Re K <= 0 (no forward-propagating mode)";
    } else if (!(mode.k_perp.real() > 0.0)) {
      mode.diagnostic = "Unconfined: Re k_perp <= 0";
    } else {
      mode.valid = true;
    }
  } catch (const Error& e) {
    mode.valid = false;
    mode.diagnostic = std::string(e.type()) + ": " + e.what();
  }
  return mode;
}

/// Named parameter set shipped with the tool (the reference configuration of
/// the dispersion study this artifact reproduces).
[[nodiscard]] inline Interface paper_2012_interface() {
  Interface i;
  i.dielectric = {1.3, 1.0};
  i.metamaterial = {5.0, 5.0, 1.37e16, 2.73e13, 1e15, 1e12};
  return i;
}

/// Reference bracket for the zero-loss search with the shipped preset.
[[nodiscard]] inline num::Bracket paper_2012_zero_loss_bracket() { return {3e14, 6e14}; }

}  // namespace spol::media
