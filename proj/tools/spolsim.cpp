// spolsim: surface-polariton cross-Kerr simulator front end.
//
// Subcommands: zero-loss, dispersion, fig3, entangle-coherent, nemoto-munro.
// Resolution order: named preset -> JSON config file -> explicit flags.
// All payloads carry a metadata block with the fully resolved configuration;
// reruns with the same inputs are byte-identical.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spol/cli.hpp"
#include "spol/config.hpp"
#include "spol/errors.hpp"
#include "spol/io.hpp"
#include "spol/version.hpp"

namespace {

struct FlagSet {
  std::string config_path;
  std::string preset = "paper-2012";
  std::string omega_min;  // accepts suffixes, e.g. "395 THz"
  std::string omega_max;
  int points = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double phi = 0.0;
  int dim = 0;
  std::uint64_t seed = 0;
  int shots = 0;
  double c0 = 0.0, c1 = 0.0, d0 = 0.0, d1 = 0.0;
  std::string out_path;
  std::string format;
};

void add_common_options(CLI::App* sub, FlagSet& f) {
  sub->add_option("--config", f.config_path, "JSON configuration file");
  sub->add_option("--preset", f.preset, "named parameter preset (paper-2012)");
  sub->add_option("--omega-min", f.omega_min,
                  "sweep lower bound, angular s^-1 (suffixes: THz/GHz/MHz)");
  sub->add_option("--omega-max", f.omega_max, "sweep upper bound, angular s^-1");
  sub->add_option("--points", f.points, "sweep point count (>= 2)");
  sub->add_option("--alpha", f.alpha, "coherent amplitude alpha");
  sub->add_option("--beta", f.beta, "coherent amplitude beta");
  sub->add_option("--phi", f.phi, "cross-Kerr phase, rad");
  sub->add_option("--dim", f.dim, "Fock-space dimension (0 = automatic)");
  sub->add_option("--seed", f.seed, "RNG seed for sampling commands");
  sub->add_option("--shots", f.shots, "number of homodyne shots");
  sub->add_option("--c0", f.c0, "first qubit amplitude c0");
  sub->add_option("--c1", f.c1, "first qubit amplitude c1");
  sub->add_option("--d0", f.d0, "second qubit amplitude d0");
  sub->add_option("--d1", f.d1, "second qubit amplitude d1");
  sub->add_option("--out", f.out_path, "output file (default: stdout)");
  sub->add_option("--format", f.format, "output format: csv or json");
}

spol::cfg::RunConfig build_config(const CLI::App* sub, const FlagSet& f) {
  using spol::cfg::RunConfig;
  RunConfig base = spol::cfg::preset_config(f.preset);
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) {
      throw spol::BadConfig("config: cannot open file \"" + f.config_path + "\"");
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw spol::BadConfig("config: JSON parse error in \"" + f.config_path +
                            "\": " + e.what());
    }
    base = spol::cfg::apply_json(doc, std::move(base));
  }
  const auto passed = [&](const std::string& name) { return sub->count(name) > 0; };
  if (passed("--omega-min")) {
    base.grid.omega_min = spol::cfg::detail::parse_quantity(
        nlohmann::json(f.omega_min), "omega-min", spol::cfg::detail::UnitKind::frequency);
  }
  if (passed("--omega-max")) {
    base.grid.omega_max = spol::cfg::detail::parse_quantity(
        nlohmann::json(f.omega_max), "omega-max", spol::cfg::detail::UnitKind::frequency);
  }
  if (passed("--points")) base.grid.points = f.points;
  if (passed("--alpha")) base.quantum.alpha = f.alpha;
  if (passed("--beta")) base.quantum.beta = f.beta;
  if (passed("--phi")) base.quantum.phi = f.phi;
  if (passed("--dim")) base.quantum.dim = f.dim;
  if (passed("--seed")) base.quantum.seed = f.seed;
  if (passed("--shots")) base.quantum.shots = f.shots;
  if (passed("--c0")) base.quantum.c0 = f.c0;
  if (passed("--c1")) base.quantum.c1 = f.c1;
  if (passed("--d0")) base.quantum.d0 = f.d0;
  if (passed("--d1")) base.quantum.d1 = f.d1;
  if (passed("--out")) base.out_path = f.out_path;
  if (passed("--format")) {
    if (f.format == "csv") {
      base.format = spol::cfg::OutputFormat::csv;
    } else if (f.format == "json") {
      base.format = spol::cfg::OutputFormat::json;
    } else {
      throw spol::BadConfig("format: must be csv or json, got \"" + f.format + "\"");
    }
  }
  base.validate();
  return base;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(spol::tool_name) +
               " - surface-polariton cross-Kerr entanglement simulator"};
  app.set_version_flag("--version", std::string(spol::tool_version));
  app.require_subcommand(1);

  FlagSet flags;
  const std::vector<std::string> commands{"zero-loss", "dispersion", "fig3",
                                          "entangle-coherent", "nemoto-munro"};
  const std::vector<std::string> descriptions{
      "locate the zero-loss frequency and report the surface mode there",
      "tabulate the surface-mode dispersion over a frequency grid",
      "sweep the Kerr coefficient and mutual phase shift over the band",
      "evolve a coherent pair under the cross-Kerr unitary and report entanglement",
      "run the seeded qubit-probe homodyne protocol"};
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    add_common_options(sub, flags);
  }

  CLI11_PARSE(app, argc, argv);

  const CLI::App* sub = app.get_subcommands().front();
  spol::cli::CmdResult result;
  std::string out_path;
  try {
    spol::cfg::RunConfig cfg = build_config(sub, flags);
    out_path = cfg.out_path;
    result = spol::cli::run_command(sub->get_name(), cfg);
  } catch (const spol::Error& e) {
    std::cout << spol::io::error_json(e);
    return 1;
  }
  if (result.is_error) {
    std::cout << result.payload;
    return result.exit_code;
  }
  try {
    spol::io::write_output(result.payload, out_path);
  } catch (const spol::Error& e) {
    std::cout << spol::io::error_json(e);
    return 1;
  }
  return 0;
}
