#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spol/config.hpp"
#include "spol/constants.hpp"
#include "spol/errors.hpp"
#include "spol/io.hpp"
#include "spol/kerr.hpp"
#include "spol/media.hpp"
#include "spol/numerics.hpp"
#include "spol/qsim.hpp"
#include "spol/version.hpp"

/// In-process command implementations behind the CLI front end. Each command
/// consumes a RunConfig, resolves per-command defaults into it, and returns the
/// rendered payload plus an exit code; the binary only parses flags and writes
/// the payload. Errors surface as a machine-readable JSON document and a
/// nonzero exit code.

namespace spol::cli {

struct CmdResult {
  int exit_code = 0;
  std::string payload;
  bool is_error = false;
};

namespace detail {

[[nodiscard]] inline cfg::OutputFormat resolve_format(cfg::OutputFormat requested,
                                                      cfg::OutputFormat fallback) {
  return requested == cfg::OutputFormat::automatic ? fallback : requested;
}

[[nodiscard]] inline nlohmann::ordered_json make_metadata(const cfg::RunConfig& c,
                                                          const char* command) {
  nlohmann::ordered_json m;
  m["tool"] = tool_name;
  m["version"] = tool_version;
  m["command"] = command;
  m["preset"] = c.preset;
  m["seed"] = c.quantum.seed;
  m["config"] = cfg::to_json(c);
  return m;
}

template <typename Fn>
[[nodiscard]] inline CmdResult guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return CmdResult{1, io::error_json(e), true};
  } catch (const std::exception& e) {
    nlohmann::ordered_json doc;
    doc["error"] = {{"type", "Internal"}, {"message", e.what()}};
    return CmdResult{1, doc.dump(2) + "\n", true};
  }
}

/// Resolves an automatic sweep band to [0.9, 1.4] * omega0.
inline void resolve_grid(cfg::RunConfig& c, double omega0) {
  if (!(c.grid.omega_min > 0.0)) c.grid.omega_min = 0.9 * omega0;
  if (!(c.grid.omega_max > 0.0)) c.grid.omega_max = 1.4 * omega0;
  if (!(c.grid.omega_min < c.grid.omega_max)) {
    throw BadConfig("sweep.omega_min: must be < sweep.omega_max, got [" +
                    std::to_string(c.grid.omega_min) + ", " +
                    std::to_string(c.grid.omega_max) + "]");
  }
}

inline void resolve_quantum_defaults(cfg::QuantumSpec& q, double alpha_default,
                                     double beta_default) {
  if (std::isnan(q.alpha)) q.alpha = alpha_default;
  if (std::isnan(q.beta)) q.beta = beta_default;
  if (std::isnan(q.phi)) q.phi = constants::pi;
}

}  // namespace detail

/// Locates the zero-loss frequency in the configured bracket and reports the
/// surface-mode quantities there.
[[nodiscard]] inline CmdResult cmd_zero_loss(cfg::RunConfig c) {
  return detail::guarded([&]() -> CmdResult {
    c.validate();
    c.format = detail::resolve_format(c.format, cfg::OutputFormat::csv);
    const double omega0 = media::find_zero_loss(c.interface, c.bracket);
    const media::SurfaceMode mode = media::mode_report(c.interface, omega0);
    const auto metadata = detail::make_metadata(c, "zero-loss");

    CmdResult r;
    if (c.format == cfg::OutputFormat::csv) {
      io::KvRows kv{{"omega0_s_inv", io::g17(omega0)},
                    {"omega0_thz", io::g17(omega0 / 1e12)},
                    {"im_k_residual", io::g17(mode.K.imag())},
                    {"re_k", io::g17(mode.K.real())},
                    {"im_k", io::g17(mode.K.imag())},
                    {"re_k_perp", io::g17(mode.k_perp.real())},
                    {"im_k_perp", io::g17(mode.k_perp.imag())},
                    {"xi", io::g17(mode.xi)},
                    {"v_g_over_c", io::g17(mode.v_g / constants::c0)}};
      r.payload = io::csv_kv(metadata, kv);
    } else {
      nlohmann::ordered_json data;
      data["omega0_s_inv"] = omega0;
      data["omega0_thz"] = omega0 / 1e12;
      data["im_k_residual"] = mode.K.imag();
      data["re_k"] = mode.K.real();
      data["im_k"] = mode.K.imag();
      data["re_k_perp"] = mode.k_perp.real();
      data["im_k_perp"] = mode.k_perp.imag();
      data["xi"] = mode.xi;
      data["v_g_over_c"] = mode.v_g / constants::c0;
      r.payload = io::json_report(metadata, data);
    }
    return r;
  });
}

/// Tabulates K(omega), k_perp, confinement and group velocity over the grid.
[[nodiscard]] inline CmdResult cmd_dispersion(cfg::RunConfig c) {
  return detail::guarded([&]() -> CmdResult {
    c.validate();
    c.format = detail::resolve_format(c.format, cfg::OutputFormat::csv);
    const double omega0 = media::find_zero_loss(c.interface, c.bracket);
    detail::resolve_grid(c, omega0);
    const std::vector<double> grid =
        num::linspace(c.grid.omega_min, c.grid.omega_max, c.grid.points);
    auto metadata = detail::make_metadata(c, "dispersion");
    metadata["omega0"] = omega0;

    const std::vector<std::string> header{"omega",     "omega_over_omega0",
                                          "re_k",      "im_k",
                                          "re_k_perp", "im_k_perp",
                                          "xi",        "v_g_over_c",
                                          "valid"};
    CmdResult r;
    if (c.format == cfg::OutputFormat::csv) {
      std::vector<std::vector<std::string>> rows;
      rows.reserve(grid.size());
      for (const double omega : grid) {
        const media::SurfaceMode m = media::mode_report(c.interface, omega);
        rows.push_back({io::g17(omega), io::g17(omega / omega0), io::g17(m.K.real()),
                        io::g17(m.K.imag()), io::g17(m.k_perp.real()),
                        io::g17(m.k_perp.imag()), io::g17(m.xi),
                        io::g17(m.v_g / constants::c0), m.valid ? "true" : "false"});
      }
      r.payload = io::csv_table(metadata, header, rows);
    } else {
      nlohmann::ordered_json data = nlohmann::ordered_json::array();
      for (const double omega : grid) {
        const media::SurfaceMode m = media::mode_report(c.interface, omega);
        nlohmann::ordered_json row;
        row["omega"] = omega;
        row["omega_over_omega0"] = omega / omega0;
        row["re_k"] = m.K.real();
        row["im_k"] = m.K.imag();
        row["re_k_perp"] = m.k_perp.real();
        row["im_k_perp"] = m.k_perp.imag();
        row["xi"] = m.xi;
        row["v_g_over_c"] = m.v_g / constants::c0;
        row["valid"] = m.valid;
        if (!m.valid) row["diagnostic"] = m.diagnostic;
        data.push_back(std::move(row));
      }
      r.payload = io::json_report(metadata, data);
    }
    return r;
  });
}

/// Kerr coefficient and mutual phase shift across the band.
[[nodiscard]] inline CmdResult cmd_fig3(cfg::RunConfig c) {
  return detail::guarded([&]() -> CmdResult {
    c.validate();
    c.format = detail::resolve_format(c.format, cfg::OutputFormat::csv);
    const double omega0 = media::find_zero_loss(c.interface, c.bracket);
    detail::resolve_grid(c, omega0);
    const std::vector<double> grid =
        num::linspace(c.grid.omega_min, c.grid.omega_max, c.grid.points);
    const std::vector<kerr::KerrPoint> sweep =
        kerr::fig3_sweep(c.interface, c.layer, c.normalization, c.length, grid);
    auto metadata = detail::make_metadata(c, "fig3");
    metadata["omega0"] = omega0;

    const std::vector<std::string> header{
        "omega", "omega_over_omega0", "re_k",         "im_k",        "xi",
        "v_g_over_c", "chi_times_1e4", "phi_over_pi", "valid"};
    CmdResult r;
    if (c.format == cfg::OutputFormat::csv) {
      std::vector<std::vector<std::string>> rows;
      rows.reserve(sweep.size());
      for (const kerr::KerrPoint& p : sweep) {
        const media::SurfaceMode m = media::mode_report(c.interface, p.omega);
        rows.push_back({io::g17(p.omega), io::g17(p.omega / omega0), io::g17(m.K.real()),
                        io::g17(m.K.imag()), io::g17(p.xi),
                        io::g17(p.v_g / constants::c0), io::g17(p.chi * 1e4),
                        io::g17(p.phi / constants::pi), p.valid ? "true" : "false"});
      }
      r.payload = io::csv_table(metadata, header, rows);
    } else {
      nlohmann::ordered_json data = nlohmann::ordered_json::array();
      for (const kerr::KerrPoint& p : sweep) {
        const media::SurfaceMode m = media::mode_report(c.interface, p.omega);
        nlohmann::ordered_json row;
        row["omega"] = p.omega;
        row["omega_over_omega0"] = p.omega / omega0;
        row["re_k"] = m.K.real();
        row["im_k"] = m.K.imag();
        row["xi"] = p.xi;
        row["v_g_over_c"] = p.v_g / constants::c0;
        row["chi_times_1e4"] = p.chi * 1e4;
        row["phi_over_pi"] = p.phi / constants::pi;
        row["valid"] = p.valid;
        if (!p.valid) row["diagnostic"] = p.diagnostic;
        data.push_back(std::move(row));
      }
      r.payload = io::json_report(metadata, data);
    }
    return r;
  });
}

/// Cross-Kerr evolution of a coherent pair: entropy of entanglement, fidelity
/// to the analytic cat decomposition, and truncation diagnostics.
[[nodiscard]] inline CmdResult cmd_entangle_coherent(cfg::RunConfig c) {
  return detail::guarded([&]() -> CmdResult {
    c.validate();
    c.format = detail::resolve_format(c.format, cfg::OutputFormat::json);
    detail::resolve_quantum_defaults(c.quantum, 2.0, 2.0);
    const double alpha = c.quantum.alpha;
    const double beta = c.quantum.beta;
    const double phi = c.quantum.phi;
    if (c.quantum.dim == 0) {
      c.quantum.dim = std::max(qsim::default_dim(std::abs(alpha)),
                               qsim::default_dim(std::abs(beta)));
    }
    const int dim = c.quantum.dim;

    const qsim::TwoModeState state = qsim::evolve_coherent_pair(alpha, beta, phi, dim);
    const qsim::TwoModeState target = qsim::cat_psi_f(alpha, beta, dim);
    const double fid = qsim::fidelity(state, target);
    const double entropy = qsim::entropy_of_entanglement(state);
    const auto metadata = detail::make_metadata(c, "entangle-coherent");

    CmdResult r;
    if (c.format == cfg::OutputFormat::json) {
      nlohmann::ordered_json data;
      data["alpha"] = alpha;
      data["beta"] = beta;
      data["phi"] = phi;
      data["dim"] = dim;
      data["tail_mass_alpha"] = qsim::coherent_tail_mass(alpha, dim);
      data["tail_mass_beta"] = qsim::coherent_tail_mass(beta, dim);
      data["state_norm"] = state.norm();
      data["entropy_bits"] = entropy;
      data["fidelity_to_cat"] = fid;
      r.payload = io::json_report(metadata, data);
    } else {
      io::KvRows kv{{"alpha", io::g17(alpha)},
                    {"beta", io::g17(beta)},
                    {"phi", io::g17(phi)},
                    {"dim", std::to_string(dim)},
                    {"tail_mass_alpha", io::g17(qsim::coherent_tail_mass(alpha, dim))},
                    {"tail_mass_beta", io::g17(qsim::coherent_tail_mass(beta, dim))},
                    {"state_norm", io::g17(state.norm())},
                    {"entropy_bits", io::g17(entropy)},
                    {"fidelity_to_cat", io::g17(fid)}};
      r.payload = io::csv_kv(metadata, kv);
    }
    return r;
  });
}

/// Qubit-probe entangling protocol with seeded homodyne sampling.
[[nodiscard]] inline CmdResult cmd_nemoto_munro(cfg::RunConfig c) {
  return detail::guarded([&]() -> CmdResult {
    c.validate();
    c.format = detail::resolve_format(c.format, cfg::OutputFormat::json);
    detail::resolve_quantum_defaults(c.quantum, 3.0, 3.0);
    const double alpha = c.quantum.alpha;
    const double phi = c.quantum.phi;
    if (c.quantum.dim == 0) c.quantum.dim = qsim::default_dim(std::abs(alpha));
    const int dim = c.quantum.dim;
    const qsim::QubitState qa{c.quantum.c0, c.quantum.c1};
    const qsim::QubitState qb{c.quantum.d0, c.quantum.d1};

    const qsim::ProtocolResult res =
        qsim::run_protocol(qa, qb, alpha, phi, dim, c.quantum.seed, c.quantum.shots);
    const auto metadata = detail::make_metadata(c, "nemoto-munro");

    CmdResult r;
    if (c.format == cfg::OutputFormat::json) {
      nlohmann::ordered_json data;
      data["alpha"] = alpha;
      data["phi"] = phi;
      data["dim"] = dim;
      data["shots"] = c.quantum.shots;
      data["threshold"] = res.threshold;
      data["count_unshifted"] = res.count_unshifted;
      data["count_shifted"] = res.count_shifted;
      data["mean_concurrence_unshifted"] = res.mean_concurrence_unshifted;
      data["mean_concurrence_shifted"] = res.mean_concurrence_shifted;
      data["mean_minority_weight"] = res.mean_minority_weight;
      data["misclassification_estimate"] = res.misclassification;
      nlohmann::ordered_json samples = nlohmann::ordered_json::array();
      for (const qsim::HomodyneSample& s : res.samples) {
        nlohmann::ordered_json row;
        row["x"] = s.x;
        row["outcome"] = qsim::outcome_name(s.outcome);
        row["concurrence"] = qsim::concurrence(s.post_state);
        row["probability_density"] = s.probability_density;
        samples.push_back(std::move(row));
      }
      data["samples"] = std::move(samples);
      r.payload = io::json_report(metadata, data);
    } else {
      // scalar summary only; per-sample records are JSON-format output
      io::KvRows kv{{"alpha", io::g17(alpha)},
                    {"phi", io::g17(phi)},
                    {"dim", std::to_string(dim)},
                    {"shots", std::to_string(c.quantum.shots)},
                    {"threshold", io::g17(res.threshold)},
                    {"count_unshifted", std::to_string(res.count_unshifted)},
                    {"count_shifted", std::to_string(res.count_shifted)},
                    {"mean_concurrence_unshifted", io::g17(res.mean_concurrence_unshifted)},
                    {"mean_concurrence_shifted", io::g17(res.mean_concurrence_shifted)},
                    {"mean_minority_weight", io::g17(res.mean_minority_weight)},
                    {"misclassification_estimate", io::g17(res.misclassification)}};
      r.payload = io::csv_kv(metadata, kv);
    }
    return r;
  });
}

/// Dispatch by subcommand name.
[[nodiscard]] inline CmdResult run_command(const std::string& name, cfg::RunConfig c) {
  if (name == "zero-loss") return cmd_zero_loss(std::move(c));
  if (name == "dispersion") return cmd_dispersion(std::move(c));
  if (name == "fig3") return cmd_fig3(std::move(c));
  if (name == "entangle-coherent") return cmd_entangle_coherent(std::move(c));
  if (name == "nemoto-munro") return cmd_nemoto_munro(std::move(c));
  nlohmann::ordered_json doc;
  doc["error"] = {{"type", "BadConfig"},
                  {"message", "unknown command \"" + name + "\""}};
  return CmdResult{2, doc.dump(2) + "\n", true};
}

}  // namespace spol::cli
