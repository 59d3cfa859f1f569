#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spol/cli.hpp"
#include "spol/config.hpp"
#include "spol/constants.hpp"
#include "spol/errors.hpp"
#include "spol/io.hpp"

using namespace spol;
using nlohmann::json;
using Catch::Approx;

namespace {

cfg::RunConfig preset() { return cfg::preset_config("paper-2012"); }

cfg::RunConfig from_json_text(const std::string& text) {
  return cfg::apply_json(json::parse(text), preset());
}

json parse_payload(const cli::CmdResult& r) { return json::parse(r.payload); }

std::vector<std::string> payload_lines(const cli::CmdResult& r) {
  std::vector<std::string> lines;
  std::string line;
  for (const char ch : r.payload) {
    if (ch == '\n') {
      lines.push_back(line);
      line.clear();
    } else {
      line += ch;
    }
  }
  if (!line.empty()) lines.push_back(line);
  return lines;
}

/// key -> value map of a scalar (key,value) CSV payload.
double csv_scalar(const cli::CmdResult& r, const std::string& key) {
  for (const auto& line : payload_lines(r)) {
    if (line.rfind(key + ",", 0) == 0) return std::stod(line.substr(key.size() + 1));
  }
  FAIL("scalar key not found in CSV payload: " << key);
  return 0.0;
}

struct TempConfigFile {
  std::filesystem::path path;
  explicit TempConfigFile(const std::string& text) {
    path = std::filesystem::temp_directory_path() / "spolsim_cli_test_config.json";
    std::ofstream out(path);
    out << text;
  }
  ~TempConfigFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

}  // namespace

TEST_CASE("empty config resolves to the full preset", "[config]") {
  const cfg::RunConfig c = cfg::apply_json(json::object(), preset());
  CHECK(c.preset == "paper-2012");
  CHECK(c.interface.dielectric.eps1 == 1.3);
  CHECK(c.interface.dielectric.mu1 == 1.0);
  CHECK(c.interface.metamaterial.eps_inf == 5.0);
  CHECK(c.interface.metamaterial.mu_inf == 5.0);
  CHECK(c.interface.metamaterial.omega_e == 1.37e16);
  CHECK(c.interface.metamaterial.gamma_e == 2.73e13);
  CHECK(c.interface.metamaterial.omega_m == 1e15);
  CHECK(c.interface.metamaterial.gamma_m == 1e12);
  CHECK(c.layer.n == 2e20);
  CHECK(c.layer.z0 == 2e-6);
  CHECK(c.layer.omega_c_rabi == Approx(2.0 * constants::pi * 1e6));
  CHECK(c.layer.delta == Approx(2.0 * constants::pi * 1.4e6));
  CHECK(c.layer.d24 == Approx(5.0 * constants::ea0));
  CHECK(c.layer.lambda_transition == 780e-9);
  CHECK(c.layer.k_c == Approx(2.0 * constants::pi / 780e-9));
  CHECK(c.normalization.width == 2e-6);
  CHECK(c.normalization.quant_length == 1e-3);
  CHECK(c.normalization.eta == 1.0);
  CHECK(c.length == 1e-3);
  CHECK(c.bracket.lo == 3e14);
  CHECK(c.bracket.hi == 6e14);
  CHECK(c.grid.points == 501);
  CHECK(std::isnan(c.quantum.alpha));
  CHECK(c.quantum.seed == 12345);
  CHECK(c.quantum.shots == 1000);
  CHECK(c.format == cfg::OutputFormat::automatic);
}

TEST_CASE("unit suffixes", "[config][units]") {
  SECTION("plain power-of-ten frequency suffixes") {
    const auto c = from_json_text(R"({"metamaterial": {"omega_e": "13700 THz"}})");
    CHECK(c.interface.metamaterial.omega_e == Approx(1.37e16).epsilon(1e-15));
    const auto c2 = from_json_text(R"({"metamaterial": {"gamma_m": "1e12 rad/s"}})");
    CHECK(c2.interface.metamaterial.gamma_m == 1e12);
  }
  SECTION("atomic-rate suffixes convert via 2 pi") {
    const auto c = from_json_text(
        R"({"layer": {"omega_c_rabi": "1 MHz", "delta": "1.4 MHz"}})");
    CHECK(c.layer.omega_c_rabi == Approx(2.0 * constants::pi * 1e6).epsilon(1e-15));
    CHECK(c.layer.delta == Approx(2.0 * constants::pi * 1.4e6).epsilon(1e-15));
    // bare rad/s value passes through unscaled
    const auto c2 = from_json_text(R"({"layer": {"delta": "8.796e6 rad/s"}})");
    CHECK(c2.layer.delta == 8.796e6);
  }
  SECTION("length suffixes") {
    const auto c = from_json_text(
        R"({"layer": {"z0": "2 um"}, "length": "1 mm", "normalization": {"width": "2000 nm"}})");
    CHECK(c.layer.z0 == Approx(2e-6).epsilon(1e-15));
    CHECK(c.length == Approx(1e-3).epsilon(1e-15));
    CHECK(c.normalization.width == Approx(2e-6).epsilon(1e-15));
  }
  SECTION("sweep band and bracket in THz") {
    const auto c = from_json_text(
        R"({"sweep": {"omega_min": "395 THz", "omega_max": "616 THz"},
            "bracket": {"lo": "300 THz", "hi": "600 THz"}})");
    CHECK(c.grid.omega_min == Approx(3.95e14).epsilon(1e-15));
    CHECK(c.grid.omega_max == Approx(6.16e14).epsilon(1e-15));
    CHECK(c.bracket.lo == Approx(3e14).epsilon(1e-15));
    CHECK(c.bracket.hi == Approx(6e14).epsilon(1e-15));
  }
  SECTION("transition wavelength also refreshes the control wavenumber") {
    const auto c = from_json_text(R"({"layer": {"lambda_transition": "795 nm"}})");
    CHECK(c.layer.lambda_transition == Approx(795e-9).epsilon(1e-15));
    CHECK(c.layer.k_c == Approx(2.0 * constants::pi / 795e-9).epsilon(1e-15));
  }
  SECTION("unknown suffix names the key") {
    try {
      (void)from_json_text(R"({"layer": {"z0": "2 parsec"}})");
      FAIL("expected BadConfig");
    } catch (const BadConfig& e) {
      CHECK(std::string(e.what()).find("layer.z0") != std::string::npos);
    }
  }
  SECTION("suffix rejected on dimensionless keys") {
    CHECK_THROWS_AS(from_json_text(R"({"quantum": {"alpha": "2 THz"}})"), BadConfig);
  }
  SECTION("bare-number string on a unit key is rejected") {
    CHECK_THROWS_AS(from_json_text(R"({"sweep": {"omega_min": "395"}})"), BadConfig);
  }
}

TEST_CASE("schema violations name the offending key", "[config][schema]") {
  SECTION("unknown top-level key") {
    try {
      (void)from_json_text(R"({"foo": 1})");
      FAIL("expected BadConfig");
    } catch (const BadConfig& e) {
      CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
  }
  SECTION("unknown nested key") {
    try {
      (void)from_json_text(R"({"layer": {"bad": 1}})");
      FAIL("expected BadConfig");
    } catch (const BadConfig& e) {
      CHECK(std::string(e.what()).find("layer.bad") != std::string::npos);
    }
  }
  SECTION("negative density names the field") {
    try {
      (void)from_json_text(R"({"layer": {"n": -2e20}})");
      FAIL("expected BadAtomicParams");
    } catch (const BadAtomicParams& e) {
      CHECK(std::string(e.what()).find("layer.n") != std::string::npos);
    }
  }
  SECTION("degenerate sweep") {
    try {
      (void)from_json_text(R"({"sweep": {"points": 1}})");
      FAIL("expected BadConfig");
    } catch (const BadConfig& e) {
      CHECK(std::string(e.what()).find("sweep.points") != std::string::npos);
    }
  }
  SECTION("unknown output format") {
    try {
      (void)from_json_text(R"({"output": {"format": "yaml"}})");
      FAIL("expected BadConfig");
    } catch (const BadConfig& e) {
      CHECK(std::string(e.what()).find("output.format") != std::string::npos);
    }
  }
  SECTION("unknown preset") {
    CHECK_THROWS_AS(from_json_text(R"({"preset": "exotic"})"), BadConfig);
  }
  SECTION("non-integer points") {
    CHECK_THROWS_AS(from_json_text(R"({"sweep": {"points": 10.5}})"), BadConfig);
  }
  SECTION("negative seed") {
    CHECK_THROWS_AS(from_json_text(R"({"quantum": {"seed": -3}})"), BadConfig);
  }
}

TEST_CASE("config files", "[config][file]") {
  SECTION("valid file applies on top of the preset") {
    const TempConfigFile file(R"({"quantum": {"alpha": 1.5}, "length": "2 mm"})");
    const cfg::RunConfig c = cfg::load_config(file.path.string());
    CHECK(c.quantum.alpha == 1.5);
    CHECK(c.length == Approx(2e-3));
    CHECK(c.interface.metamaterial.omega_e == 1.37e16);  // untouched preset value
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(cfg::load_config("/nonexistent/spolsim.json"), BadConfig);
  }
  SECTION("malformed JSON") {
    const TempConfigFile file("{not json");
    try {
      (void)cfg::load_config(file.path.string());
      FAIL("expected BadConfig");
    } catch (const BadConfig& e) {
      CHECK(std::string(e.what()).find("parse error") != std::string::npos);
    }
  }
}

TEST_CASE("resolved config round-trips through its serialization", "[config][roundtrip]") {
  const cfg::RunConfig c1 = from_json_text(
      R"({"quantum": {"alpha": 2.0, "beta": 1.0, "phi": 3.1, "dim": 30},
          "sweep": {"omega_min": "400 THz", "omega_max": "600 THz", "points": 7},
          "normalization": {"eta": 2.5}})");
  const auto j1 = cfg::to_json(c1);
  const cfg::RunConfig c2 = cfg::apply_json(json::parse(j1.dump()), preset());
  CHECK(cfg::to_json(c2) == j1);
}

TEST_CASE("zero-loss command", "[cli][zero-loss]") {
  SECTION("CSV payload with metadata comments") {
    const auto r = cli::cmd_zero_loss(preset());
    REQUIRE(r.exit_code == 0);
    REQUIRE_FALSE(r.is_error);
    const auto lines = payload_lines(r);
    REQUIRE(lines.size() > 6);
    CHECK(lines[0] == "# tool: spolsim");
    CHECK(lines[1].rfind("# version: ", 0) == 0);
    CHECK(lines[2] == "# command: zero-loss");
    const double omega0 = csv_scalar(r, "omega0_s_inv");
    CHECK(std::abs(omega0 - 4.4e14) / 4.4e14 < 0.05);
    CHECK(csv_scalar(r, "omega0_thz") == Approx(omega0 / 1e12).epsilon(1e-15));
    CHECK(std::abs(csv_scalar(r, "im_k_residual")) < 1e-6);
  }
  SECTION("JSON payload carries the resolved config") {
    cfg::RunConfig c = preset();
    c.format = cfg::OutputFormat::json;
    const auto r = cli::cmd_zero_loss(c);
    REQUIRE(r.exit_code == 0);
    const json doc = parse_payload(r);
    CHECK(doc["metadata"]["tool"] == "spolsim");
    CHECK(doc["metadata"]["command"] == "zero-loss");
    CHECK(doc["metadata"]["preset"] == "paper-2012");
    CHECK(doc["metadata"]["seed"] == 12345);
    CHECK(doc["metadata"]["config"]["dielectric"]["eps1"] == 1.3);
    CHECK(doc["metadata"]["config"]["layer"]["n"] == 2e20);
    CHECK(doc["data"]["omega0_s_inv"].get<double>() ==
          Approx(438870648227878.94).epsilon(1e-9));
    // group velocity is a finite-difference derivative taken at a root-found
    // frequency, so only the chain tolerance applies
    CHECK(doc["data"]["v_g_over_c"].get<double>() ==
          Approx(0.8713243518974767).epsilon(1e-6));
  }
  SECTION("bracket excluding the crossing is a machine-readable error") {
    cfg::RunConfig c = preset();
    c.bracket = {5e14, 6e14};
    const auto r = cli::cmd_zero_loss(c);
    CHECK(r.exit_code == 1);
    CHECK(r.is_error);
    const json doc = parse_payload(r);
    CHECK(doc["error"]["type"] == "NoSignChange");
    CHECK_FALSE(doc["error"]["message"].get<std::string>().empty());
  }
  SECTION("invalid layer surfaces as a schema error") {
    cfg::RunConfig c = preset();
    c.layer.n = -1.0;
    const auto r = cli::cmd_zero_loss(c);
    CHECK(r.exit_code == 1);
    const json doc = parse_payload(r);
    CHECK(doc["error"]["type"] == "BadAtomicParams");
    CHECK(doc["error"]["message"].get<std::string>().find("layer.n") != std::string::npos);
  }
}

TEST_CASE("dispersion command", "[cli][dispersion]") {
  cfg::RunConfig c = preset();
  c.grid.points = 5;
  c.format = cfg::OutputFormat::json;
  const auto r = cli::cmd_dispersion(c);
  REQUIRE(r.exit_code == 0);
  const json doc = parse_payload(r);
  const double omega0 = doc["metadata"]["omega0"].get<double>();
  REQUIRE(doc["data"].size() == 5);
  CHECK(doc["data"][0]["omega"].get<double>() == Approx(0.9 * omega0).epsilon(1e-12));
  CHECK(doc["data"][4]["omega"].get<double>() == Approx(1.4 * omega0).epsilon(1e-12));
  for (const auto& row : doc["data"]) {
    CHECK(row.contains("re_k"));
    CHECK(row.contains("xi"));
    CHECK(row.contains("v_g_over_c"));
    CHECK(row["valid"].is_boolean());
  }
}

TEST_CASE("fig3 command", "[cli][fig3]") {
  SECTION("default CSV: 501 rows behind the exact header") {
    const auto r = cli::cmd_fig3(preset());
    REQUIRE(r.exit_code == 0);
    const auto lines = payload_lines(r);
    std::size_t header_at = 0;
    std::size_t comments = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].rfind("# ", 0) == 0) {
        ++comments;
      } else {
        header_at = i;
        break;
      }
    }
    CHECK(comments == 7);  // tool, version, command, preset, seed, config, omega0
    CHECK(lines[header_at] ==
          "omega,omega_over_omega0,re_k,im_k,xi,v_g_over_c,chi_times_1e4,phi_over_pi,valid");
    CHECK(lines.size() - header_at - 1 == 501);
    bool found_omega0_line = false;
    for (std::size_t i = 0; i < header_at; ++i) {
      if (lines[i].rfind("# omega0: ", 0) == 0) found_omega0_line = true;
    }
    CHECK(found_omega0_line);
  }
  SECTION("reruns are byte-identical") {
    const auto r1 = cli::cmd_fig3(preset());
    const auto r2 = cli::cmd_fig3(preset());
    CHECK(r1.payload == r2.payload);
  }
  SECTION("points = 2 yields exactly two data rows") {
    cfg::RunConfig c = preset();
    c.grid.points = 2;
    const auto r = cli::cmd_fig3(c);
    REQUIRE(r.exit_code == 0);
    const auto lines = payload_lines(r);
    std::size_t data_rows = 0;
    bool past_header = false;
    for (const auto& line : lines) {
      if (line.rfind("# ", 0) == 0) continue;
      if (!past_header) {
        past_header = true;  // header row
        continue;
      }
      ++data_rows;
    }
    CHECK(data_rows == 2);
  }
  SECTION("JSON sweep: all valid, sensible chi, phase crossing present") {
    cfg::RunConfig c = preset();
    c.format = cfg::OutputFormat::json;
    const auto r = cli::cmd_fig3(c);
    REQUIRE(r.exit_code == 0);
    const json doc = parse_payload(r);
    REQUIRE(doc["data"].size() == 501);
    double chi_at_omega0 = 0.0;
    double best = 1e300;
    double prev_ratio = 0.0;
    double prev_phi = 0.0;
    bool crossing = false;
    bool first = true;
    for (const auto& row : doc["data"]) {
      CHECK(row["valid"].get<bool>());
      const double ratio = row["omega_over_omega0"].get<double>();
      const double phi_norm = row["phi_over_pi"].get<double>();
      if (std::abs(ratio - 1.0) < best) {
        best = std::abs(ratio - 1.0);
        chi_at_omega0 = row["chi_times_1e4"].get<double>();
      }
      if (!first && (prev_phi - 1.0) * (phi_norm - 1.0) < 0.0 && prev_ratio > 1.1 &&
          ratio < 1.38) {
        crossing = true;
      }
      prev_ratio = ratio;
      prev_phi = phi_norm;
      first = false;
    }
    CHECK(chi_at_omega0 > 0.1);
    CHECK(chi_at_omega0 < 10.0);
    CHECK(crossing);
  }
}

TEST_CASE("entangle-coherent command", "[cli][entangle]") {
  SECTION("defaults: maximal cat at alpha = beta = 2, phi = pi") {
    const auto r = cli::cmd_entangle_coherent(preset());
    REQUIRE(r.exit_code == 0);
    const json doc = parse_payload(r);
    CHECK(doc["metadata"]["command"] == "entangle-coherent");
    CHECK(doc["metadata"]["config"]["quantum"]["alpha"] == 2.0);
    CHECK(doc["metadata"]["config"]["quantum"]["beta"] == 2.0);
    CHECK(doc["metadata"]["config"]["quantum"]["phi"].get<double>() ==
          Approx(constants::pi));
    CHECK(doc["data"]["dim"] == 26);
    CHECK(doc["data"]["entropy_bits"].get<double>() >= 0.99);
    CHECK(doc["data"]["fidelity_to_cat"].get<double>() >= 1.0 - 1e-8);
    CHECK(doc["data"]["state_norm"].get<double>() == Approx(1.0).margin(1e-9));
    CHECK(doc["data"]["tail_mass_alpha"].get<double>() <= 1e-10);
  }
  SECTION("zero interaction phase leaves a product state") {
    cfg::RunConfig c = preset();
    c.quantum.phi = 0.0;
    const auto r = cli::cmd_entangle_coherent(c);
    REQUIRE(r.exit_code == 0);
    CHECK(parse_payload(r)["data"]["entropy_bits"].get<double>() <= 1e-10);
  }
  SECTION("vacuum probe leaves a product state") {
    cfg::RunConfig c = preset();
    c.quantum.alpha = 0.0;
    const auto r = cli::cmd_entangle_coherent(c);
    REQUIRE(r.exit_code == 0);
    CHECK(parse_payload(r)["data"]["entropy_bits"].get<double>() <= 1e-10);
  }
  SECTION("undersized truncation is reported with a suggestion") {
    cfg::RunConfig c = preset();
    c.quantum.dim = 12;
    const auto r = cli::cmd_entangle_coherent(c);
    CHECK(r.exit_code == 1);
    const json doc = parse_payload(r);
    CHECK(doc["error"]["type"] == "TruncationTooSevere");
    CHECK(doc["error"]["message"].get<std::string>().find("need dim >=") !=
          std::string::npos);
  }
  SECTION("CSV variant") {
    cfg::RunConfig c = preset();
    c.format = cfg::OutputFormat::csv;
    const auto r = cli::cmd_entangle_coherent(c);
    REQUIRE(r.exit_code == 0);
    CHECK(payload_lines(r)[0] == "# tool: spolsim");
    CHECK(csv_scalar(r, "entropy_bits") >= 0.99);
    CHECK(csv_scalar(r, "fidelity_to_cat") >= 1.0 - 1e-8);
  }
}

TEST_CASE("nemoto-munro command", "[cli][protocol]") {
  SECTION("single shot produces a single sample record") {
    cfg::RunConfig c = preset();
    c.quantum.shots = 1;
    const auto r = cli::cmd_nemoto_munro(c);
    REQUIRE(r.exit_code == 0);
    const json doc = parse_payload(r);
    CHECK(doc["data"]["samples"].size() == 1);
    CHECK(doc["data"]["count_unshifted"].get<long>() +
              doc["data"]["count_shifted"].get<long>() ==
          1);
  }
  SECTION("defaults: alpha 3, phi pi, automatic dimension") {
    cfg::RunConfig c = preset();
    c.quantum.shots = 100;
    const auto r = cli::cmd_nemoto_munro(c);
    REQUIRE(r.exit_code == 0);
    const json doc = parse_payload(r);
    CHECK(doc["data"]["alpha"] == 3.0);
    CHECK(doc["data"]["phi"].get<double>() == Approx(constants::pi));
    CHECK(doc["data"]["dim"] == 37);
    CHECK(doc["data"]["threshold"].get<double>() == Approx(0.0).margin(1e-12));
    CHECK(doc["data"]["count_unshifted"].get<long>() +
              doc["data"]["count_shifted"].get<long>() ==
          100);
    CHECK(doc["data"]["mean_concurrence_unshifted"].get<double>() >= 0.99);
    CHECK(doc["data"]["mean_concurrence_shifted"].get<double>() >= 0.99);
    CHECK(doc["data"]["misclassification_estimate"].get<double>() ==
          Approx(9.865876450376937e-10).epsilon(1e-9));
    for (const auto& s : doc["data"]["samples"]) {
      CHECK((s["outcome"] == "unshifted" || s["outcome"] == "shifted"));
      CHECK(s["concurrence"].get<double>() >= 0.0);
      CHECK(s["probability_density"].get<double>() > 0.0);
    }
  }
  SECTION("fixed seed reruns are byte-identical; fresh seeds differ") {
    cfg::RunConfig c = preset();
    c.quantum.shots = 32;
    const auto r1 = cli::cmd_nemoto_munro(c);
    const auto r2 = cli::cmd_nemoto_munro(c);
    CHECK(r1.payload == r2.payload);
    c.quantum.seed = 999;
    const auto r3 = cli::cmd_nemoto_munro(c);
    CHECK(r3.payload != r1.payload);
  }
  SECTION("unnormalized qubit amplitudes are rejected") {
    cfg::RunConfig c = preset();
    c.quantum.c0 = 0.9;
    c.quantum.c1 = 0.9;
    const auto r = cli::cmd_nemoto_munro(c);
    CHECK(r.exit_code == 1);
    CHECK(parse_payload(r)["error"]["type"] == "NotNormalized");
  }
  SECTION("zero shots is a seed/shot configuration error") {
    cfg::RunConfig c = preset();
    c.quantum.shots = 0;
    const auto r = cli::cmd_nemoto_munro(c);
    CHECK(r.exit_code == 1);
    CHECK(parse_payload(r)["error"]["type"] == "BadSeedConfig");
  }
  SECTION("CSV summary omits per-sample records") {
    cfg::RunConfig c = preset();
    c.quantum.shots = 16;
    c.format = cfg::OutputFormat::csv;
    const auto r = cli::cmd_nemoto_munro(c);
    REQUIRE(r.exit_code == 0);
    CHECK(r.payload.find("samples") == std::string::npos);
    CHECK(csv_scalar(r, "mean_concurrence_unshifted") >= 0.99);
  }
}

TEST_CASE("command dispatch", "[cli][dispatch]") {
  SECTION("known name routes to the implementation") {
    cfg::RunConfig c = preset();
    c.grid.points = 2;
    const auto r = cli::run_command("fig3", c);
    CHECK(r.exit_code == 0);
  }
  SECTION("unknown name exits with a usage error") {
    const auto r = cli::run_command("bogus", preset());
    CHECK(r.exit_code == 2);
    CHECK(parse_payload(r)["error"]["type"] == "BadConfig");
  }
}

TEST_CASE("17-significant-digit rendering", "[io]") {
  CHECK(io::g17(0.5) == "0.5");
  CHECK(io::g17(1.0 / 3.0) == "0.33333333333333331");
  CHECK(io::g17(12345.0) == "12345");
  CHECK(io::g17(0.1) == "0.10000000000000001");
  CHECK(io::g17(std::numeric_limits<double>::infinity()) == "inf");
}
