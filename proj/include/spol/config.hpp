#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "spol/errors.hpp"
#include "spol/kerr.hpp"
#include "spol/media.hpp"
#include "spol/numerics.hpp"
#include "spol/version.hpp"

/// Run configuration: presets, JSON config files with unit-suffix quantities,
/// and serialization of the fully resolved configuration for output metadata.
///
/// Unit policy: bare numbers are SI (angular frequency s^-1, lengths m,
/// dipoles C*m). Strings may carry a suffix:
///   - frequency keys (omega_e, gamma_e, omega_m, gamma_m, omega_min,
///     omega_max, bracket bounds): THz/GHz/MHz/kHz/Hz scale by a plain power
///     of ten -- the literature quotes angular frequencies in "THz" as
///     omega/1e12, so no 2*pi is applied;
///   - atomic rate keys (omega_c_rabi, delta): the suffix denotes an ordinary
///     frequency nu, converted to angular via 2*pi (e.g. "1 MHz" -> 2*pi*1e6);
///   - length keys (z0, width, quant_length, length, lambda_transition):
///     m/mm/um/nm.

namespace spol::cfg {

enum class OutputFormat : std::uint8_t { automatic, csv, json };

[[nodiscard]] inline const char* format_name(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    default: return "auto";
  }
}

struct GridSpec {
  double omega_min = 0.0;  ///< 0 = automatic (0.9 * omega0)
  double omega_max = 0.0;  ///< 0 = automatic (1.4 * omega0)
  int points = 501;
};

/// Quantum-protocol parameters. alpha/beta/phi default to NaN sentinels and
/// are resolved per command (entangle-coherent: alpha = beta = 2, phi = pi;
/// nemoto-munro: alpha = 3, phi = pi).
struct QuantumSpec {
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
  int dim = 0;  ///< 0 = automatic from |alpha|
  std::uint64_t seed = 12345;
  int shots = 1000;
  double c0 = 1.0 / std::numbers::sqrt2;
  double c1 = 1.0 / std::numbers::sqrt2;
  double d0 = 1.0 / std::numbers::sqrt2;
  double d1 = 1.0 / std::numbers::sqrt2;
};

struct RunConfig {
  std::string preset = "paper-2012";
  media::Interface interface;
  kerr::AtomicLayer layer;
  kerr::FieldNormalization normalization;
  double length = 1e-3;  ///< interaction length L, m
  num::Bracket bracket{3e14, 6e14};
  GridSpec grid;
  QuantumSpec quantum;
  std::string out_path;  ///< empty = stdout
  OutputFormat format = OutputFormat::automatic;

  void validate() const {
    interface.validate();
    layer.validate();
    normalization.validate();
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw BadConfig("length: must be > 0, got " + std::to_string(length));
    }
    if (!(bracket.lo < bracket.hi)) {
      throw BadConfig("bracket: requires lo < hi, got [" + std::to_string(bracket.lo) +
                      ", " + std::to_string(bracket.hi) + "]");
    }
    if (grid.points < 2) {
      throw BadConfig("sweep.points: must be >= 2, got " + std::to_string(grid.points));
    }
    if (grid.omega_min > 0.0 && grid.omega_max > 0.0 && !(grid.omega_min < grid.omega_max)) {
      throw BadConfig("sweep.omega_min: must be < sweep.omega_max");
    }
    if (quantum.dim < 0) {
      throw BadConfig("quantum.dim: must be >= 0 (0 = automatic), got " +
                      std::to_string(quantum.dim));
    }
  }
};

/// Shipped preset catalog; currently the single reference configuration.
[[nodiscard]] inline RunConfig preset_config(const std::string& name) {
  if (name == "paper-2012") {
    RunConfig cfg;
    cfg.preset = name;
    cfg.interface = media::paper_2012_interface();
    cfg.layer = kerr::paper_2012_layer();
    cfg.normalization = kerr::paper_2012_normalization();
    cfg.bracket = media::paper_2012_zero_loss_bracket();
    return cfg;
  }
  throw BadConfig("preset: unknown preset \"" + name + "\"; known presets: paper-2012");
}

namespace detail {

enum class UnitKind : std::uint8_t { plain, frequency, atomic_rate, length };

[[nodiscard]] inline double suffix_multiplier(std::string_view unit, UnitKind kind,
                                              const std::string& key) {
  struct Entry {
    std::string_view name;
    double factor;
  };
  if (kind == UnitKind::frequency || kind == UnitKind::atomic_rate) {
    constexpr Entry table[] = {{"THz", 1e12}, {"GHz", 1e9}, {"MHz", 1e6},
                               {"kHz", 1e3},  {"Hz", 1.0},  {"s^-1", 1.0},
                               {"1/s", 1.0},  {"rad/s", 1.0}};
    for (const auto& e : table) {
      if (unit == e.name) {
        // Hz-family suffixes on atomic rates denote ordinary frequencies.
        const bool hz_family = unit.size() >= 2 && unit.substr(unit.size() - 2) == "Hz";
        if (kind == UnitKind::atomic_rate && hz_family) {
          return 2.0 * constants::pi * e.factor;
        }
        return e.factor;
      }
    }
  } else if (kind == UnitKind::length) {
    constexpr Entry table[] = {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
    for (const auto& e : table) {
      if (unit == e.name) return e.factor;
    }
  }
  throw BadConfig(key + ": unknown unit suffix \"" + std::string(unit) + "\"");
}

[[nodiscard]] inline double parse_quantity(const nlohmann::json& value, const std::string& key,
                                           UnitKind kind) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    std::size_t begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) {
      throw BadConfig(key + ": empty quantity string");
    }
    double magnitude = 0.0;
    const char* first = s.data() + begin;
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, magnitude);
    if (ec != std::errc{} || ptr == first) {
      throw BadConfig(key + ": cannot parse quantity \"" + s + "\"");
    }
    std::string_view rest(ptr, static_cast<std::size_t>(last - ptr));
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
      rest.remove_prefix(1);
    }
    while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t')) {
      rest.remove_suffix(1);
    }
    if (rest.empty()) {
      if (kind == UnitKind::plain) return magnitude;
      throw BadConfig(key + ": quantity string \"" + s + "\" is missing a unit suffix" +
                      " (use a bare number for SI values)");
    }
    if (kind == UnitKind::plain) {
      throw BadConfig(key + ": unexpected unit suffix on dimensionless/SI-only key");
    }
    return magnitude * suffix_multiplier(rest, kind, key);
  }
  throw BadConfig(key + ": expected a number or a quantity string, got " +
                  std::string(value.type_name()));
}

inline void reject_unknown_keys(const nlohmann::json& obj, const std::string& path,
                                std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      const std::string where = path.empty() ? item.key() : path + "." + item.key();
      throw BadConfig(where + ": unknown config key");
    }
  }
}

inline void read_quantity(const nlohmann::json& obj, const char* key, const std::string& path,
                          UnitKind kind, double& target) {
  if (obj.contains(key)) {
    target = parse_quantity(obj.at(key), path + "." + key, kind);
  }
}

inline void read_int(const nlohmann::json& obj, const char* key, const std::string& path,
                     int& target) {
  if (obj.contains(key)) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) {
      throw BadConfig(path + "." + key + ": expected an integer, got " +
                      std::string(v.type_name()));
    }
    target = v.get<int>();
  }
}

inline void read_seed(const nlohmann::json& obj, const char* key, const std::string& path,
                      std::uint64_t& target) {
  if (obj.contains(key)) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
      throw BadConfig(path + "." + key + ": expected a nonnegative integer, got " +
                      v.dump());
    }
    target = v.get<std::uint64_t>();
  }
}

}  // namespace detail

/// Applies a parsed JSON document on top of `base`. Unknown keys are schema
/// errors; every error names the offending key and the violated constraint.
[[nodiscard]] inline RunConfig apply_json(const nlohmann::json& doc, RunConfig base) {
  using detail::UnitKind;
  if (!doc.is_object()) {
    throw BadConfig("config: top-level JSON value must be an object");
  }
  detail::reject_unknown_keys(doc, "",
                              {"preset", "dielectric", "metamaterial", "layer",
                               "normalization", "length", "bracket", "sweep", "quantum",
                               "output"});
  if (doc.contains("preset")) {
    const auto& v = doc.at("preset");
    if (!v.is_string()) throw BadConfig("preset: expected a string");
    base = preset_config(v.get<std::string>());
  }
  if (doc.contains("dielectric")) {
    const auto& d = doc.at("dielectric");
    detail::reject_unknown_keys(d, "dielectric", {"eps1", "mu1"});
    detail::read_quantity(d, "eps1", "dielectric", UnitKind::plain, base.interface.dielectric.eps1);
    detail::read_quantity(d, "mu1", "dielectric", UnitKind::plain, base.interface.dielectric.mu1);
  }
  if (doc.contains("metamaterial")) {
    const auto& m = doc.at("metamaterial");
    detail::reject_unknown_keys(
        m, "metamaterial", {"eps_inf", "mu_inf", "omega_e", "gamma_e", "omega_m", "gamma_m"});
    auto& mm = base.interface.metamaterial;
    detail::read_quantity(m, "eps_inf", "metamaterial", UnitKind::plain, mm.eps_inf);
    detail::read_quantity(m, "mu_inf", "metamaterial", UnitKind::plain, mm.mu_inf);
    detail::read_quantity(m, "omega_e", "metamaterial", UnitKind::frequency, mm.omega_e);
    detail::read_quantity(m, "gamma_e", "metamaterial", UnitKind::frequency, mm.gamma_e);
    detail::read_quantity(m, "omega_m", "metamaterial", UnitKind::frequency, mm.omega_m);
    detail::read_quantity(m, "gamma_m", "metamaterial", UnitKind::frequency, mm.gamma_m);
  }
  if (doc.contains("layer")) {
    const auto& l = doc.at("layer");
    detail::reject_unknown_keys(l, "layer",
                                {"n", "z0", "omega_c_rabi", "delta", "d24", "d26", "k_c",
                                 "lambda_transition"});
    auto& layer = base.layer;
    detail::read_quantity(l, "n", "layer", UnitKind::plain, layer.n);
    detail::read_quantity(l, "z0", "layer", UnitKind::length, layer.z0);
    detail::read_quantity(l, "omega_c_rabi", "layer", UnitKind::atomic_rate, layer.omega_c_rabi);
    detail::read_quantity(l, "delta", "layer", UnitKind::atomic_rate, layer.delta);
    detail::read_quantity(l, "d24", "layer", UnitKind::plain, layer.d24);
    detail::read_quantity(l, "d26", "layer", UnitKind::plain, layer.d26);
    detail::read_quantity(l, "k_c", "layer", UnitKind::plain, layer.k_c);
    if (l.contains("lambda_transition")) {
      layer.lambda_transition = detail::parse_quantity(l.at("lambda_transition"),
                                                       "layer.lambda_transition",
                                                       UnitKind::length);
      layer.k_c = 2.0 * constants::pi / layer.lambda_transition;
    }
  }
  if (doc.contains("normalization")) {
    const auto& n = doc.at("normalization");
    detail::reject_unknown_keys(n, "normalization", {"width", "quant_length", "eta"});
    detail::read_quantity(n, "width", "normalization", UnitKind::length,
                          base.normalization.width);
    detail::read_quantity(n, "quant_length", "normalization", UnitKind::length,
                          base.normalization.quant_length);
    detail::read_quantity(n, "eta", "normalization", UnitKind::plain, base.normalization.eta);
  }
  if (doc.contains("length")) {
    base.length = detail::parse_quantity(doc.at("length"), "length", UnitKind::length);
  }
  if (doc.contains("bracket")) {
    const auto& b = doc.at("bracket");
    detail::reject_unknown_keys(b, "bracket", {"lo", "hi"});
    detail::read_quantity(b, "lo", "bracket", UnitKind::frequency, base.bracket.lo);
    detail::read_quantity(b, "hi", "bracket", UnitKind::frequency, base.bracket.hi);
  }
  if (doc.contains("sweep")) {
    const auto& s = doc.at("sweep");
    detail::reject_unknown_keys(s, "sweep", {"omega_min", "omega_max", "points"});
    detail::read_quantity(s, "omega_min", "sweep", UnitKind::frequency, base.grid.omega_min);
    detail::read_quantity(s, "omega_max", "sweep", UnitKind::frequency, base.grid.omega_max);
    detail::read_int(s, "points", "sweep", base.grid.points);
  }
  if (doc.contains("quantum")) {
    const auto& q = doc.at("quantum");
    detail::reject_unknown_keys(q, "quantum",
                                {"alpha", "beta", "phi", "dim", "seed", "shots", "c0", "c1",
                                 "d0", "d1"});
    auto& qu = base.quantum;
    detail::read_quantity(q, "alpha", "quantum", UnitKind::plain, qu.alpha);
    detail::read_quantity(q, "beta", "quantum", UnitKind::plain, qu.beta);
    detail::read_quantity(q, "phi", "quantum", UnitKind::plain, qu.phi);
    detail::read_int(q, "dim", "quantum", qu.dim);
    detail::read_seed(q, "seed", "quantum", qu.seed);
    detail::read_int(q, "shots", "quantum", qu.shots);
    detail::read_quantity(q, "c0", "quantum", UnitKind::plain, qu.c0);
    detail::read_quantity(q, "c1", "quantum", UnitKind::plain, qu.c1);
    detail::read_quantity(q, "d0", "quantum", UnitKind::plain, qu.d0);
    detail::read_quantity(q, "d1", "quantum", UnitKind::plain, qu.d1);
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    detail::reject_unknown_keys(o, "output", {"path", "format"});
    if (o.contains("path")) {
      if (!o.at("path").is_string()) throw BadConfig("output.path: expected a string");
      base.out_path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      if (!o.at("format").is_string()) {
        throw BadConfig("output.format: expected a string (csv|json)");
      }
      const std::string f = o.at("format").get<std::string>();
      if (f == "csv") {
        base.format = OutputFormat::csv;
      } else if (f == "json") {
        base.format = OutputFormat::json;
      } else if (f == "auto") {
        base.format = OutputFormat::automatic;
      } else {
        throw BadConfig("output.format: must be one of csv|json, got \"" + f + "\"");
      }
    }
  }
  base.validate();
  return base;
}

/// Loads a JSON config file on top of the reference preset defaults.
[[nodiscard]] inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw BadConfig("config: cannot open file \"" + path + "\"");
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw BadConfig("config: JSON parse error in \"" + path + "\": " + e.what());
  }
  return apply_json(doc, preset_config("paper-2012"));
}

/// Fully resolved configuration as an ordered JSON object (metadata block).
/// NaN sentinels (unresolved quantum defaults) serialize as null.
[[nodiscard]] inline nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["preset"] = cfg.preset;
  j["dielectric"] = {{"eps1", cfg.interface.dielectric.eps1},
                     {"mu1", cfg.interface.dielectric.mu1}};
  const auto& mm = cfg.interface.metamaterial;
  j["metamaterial"] = {{"eps_inf", mm.eps_inf}, {"mu_inf", mm.mu_inf},
                       {"omega_e", mm.omega_e}, {"gamma_e", mm.gamma_e},
                       {"omega_m", mm.omega_m}, {"gamma_m", mm.gamma_m}};
  j["layer"] = {{"n", cfg.layer.n},
                {"z0", cfg.layer.z0},
                {"omega_c_rabi", cfg.layer.omega_c_rabi},
                {"delta", cfg.layer.delta},
                {"d24", cfg.layer.d24},
                {"d26", cfg.layer.d26},
                {"k_c", cfg.layer.k_c},
                {"lambda_transition", cfg.layer.lambda_transition}};
  j["normalization"] = {{"width", cfg.normalization.width},
                        {"quant_length", cfg.normalization.quant_length},
                        {"eta", cfg.normalization.eta}};
  j["length"] = cfg.length;
  j["bracket"] = {{"lo", cfg.bracket.lo}, {"hi", cfg.bracket.hi}};
  j["sweep"] = {{"omega_min", cfg.grid.omega_min},
                {"omega_max", cfg.grid.omega_max},
                {"points", cfg.grid.points}};
  j["quantum"] = {{"alpha", cfg.quantum.alpha}, {"beta", cfg.quantum.beta},
                  {"phi", cfg.quantum.phi},     {"dim", cfg.quantum.dim},
                  {"seed", cfg.quantum.seed},   {"shots", cfg.quantum.shots},
                  {"c0", cfg.quantum.c0},       {"c1", cfg.quantum.c1},
                  {"d0", cfg.quantum.d0},       {"d1", cfg.quantum.d1}};
  j["output"] = {{"path", cfg.out_path}, {"format", format_name(cfg.format)}};
  return j;
}

}  // namespace spol::cfg
