// End-to-end library walkthrough: dispersion -> Kerr coefficient -> phase
// shift -> entangled-state generation -> homodyne protocol. Prints a short
// human-readable summary of each stage.

#include <cstdio>

#include "spol/cli.hpp"

int main() {
  using namespace spol;

  // Stage 1: surface-mode dispersion on the shipped interface preset.
  const media::Interface iface = media::paper_2012_interface();
  const double omega0 = media::find_zero_loss(iface, media::paper_2012_zero_loss_bracket());
  const media::SurfaceMode mode = media::mode_report(iface, omega0);
  std::printf("zero-loss frequency     omega0 = %.6e s^-1 (%.1f THz)\n", omega0,
              omega0 / 1e12);
  std::printf("in-plane wavevector     K(omega0) = %.6e + %.2e i m^-1\n", mode.K.real(),
              mode.K.imag());
  std::printf("group velocity          v_g/c = %.4f\n",
              mode.v_g / constants::c0);

  // Stage 2: cross-Kerr coefficient and mutual phase shift for the reference
  // atomic layer, evaluated at omega0 and at the pi-phase frequency.
  const kerr::AtomicLayer layer = kerr::paper_2012_layer();
  const kerr::FieldNormalization norm = kerr::paper_2012_normalization();
  const double length = 1e-3;
  const double chi0 = kerr::kerr_coefficient(iface, layer, norm, omega0);
  std::printf("Kerr coefficient        chi(omega0) = %.4e\n", chi0);
  const double omega_pi = kerr::find_pi_frequency(iface, layer, norm, length,
                                                  {1.05 * omega0, 1.40 * omega0});
  std::printf("pi-phase frequency      omega_pi/omega0 = %.4f\n", omega_pi / omega0);

  // Stage 3: cross-Kerr evolution of a coherent pair into a cat state.
  const double alpha = 2.0, beta = 2.0;
  const int dim = qsim::default_dim(alpha);
  const qsim::TwoModeState evolved =
      qsim::evolve_coherent_pair(alpha, beta, constants::pi, dim);
  const qsim::TwoModeState target = qsim::cat_psi_f(alpha, beta, dim);
  std::printf("cat-state fidelity      F = %.12f\n", qsim::fidelity(evolved, target));
  std::printf("entropy of entanglement S = %.6f bits\n",
              qsim::entropy_of_entanglement(evolved));

  // Stage 4: qubit-probe protocol with homodyne conditioning.
  const qsim::QubitState balanced{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  const qsim::ProtocolResult protocol = qsim::run_protocol(
      balanced, balanced, 3.0, constants::pi, qsim::default_dim(3.0), 12345, 200);
  std::printf("protocol outcomes       unshifted %ld / shifted %ld\n",
              protocol.count_unshifted, protocol.count_shifted);
  std::printf("mean concurrence        %.6f (unshifted), %.6f (shifted)\n",
              protocol.mean_concurrence_unshifted, protocol.mean_concurrence_shifted);
  std::printf("misclassification       %.3e (Gaussian estimate)\n",
              protocol.misclassification);
  return 0;
}
