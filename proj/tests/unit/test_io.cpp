#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "shnw/errors.hpp"
#include "shnw/io.hpp"

using namespace shnw;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("shnw_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kMinimal = R"({"d": 3, "M": 8, "gamma": 1.0, "mu": 1.0, "dt": 0.01, "t_final": 0.1})";

SimConfig small_ensemble() {
  SimConfig c = parse_config(kMinimal);
  c.d = 2;
  c.mu = 0.0;
  c.t_final = 0.1;
  c.noise.amplitude = 1.0;
  c.noise.cutoff = 2.0;
  c.trajectories = 4;
  c.master_seed = 17;
  return c;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("field and state snapshots round trip exactly") {
  const SpectralGrid g(3, 4, 2.5);
  RngStream rng(1, 0, Substream::test);
  const Field f = random_field(g, rng);
  std::stringstream ss;
  write_field(ss, f);
  const std::string bytes = ss.str();
  CHECK(bytes.substr(0, 4) == "SHNW");
  CHECK(bytes[4] == 0x01);
  CHECK(bytes.size() == 4 + 1 + 4 + 3 * 4 + 8 + 1 + 8 * g.size());
  const Field back = read_field(ss);
  CHECK(back.grid() == g);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(back.values()[i] == f.values()[i]);

  const fs::path dir = scratch("snap");
  const WaveState s{random_field(g, rng), random_field(g, rng), 0.0};
  write_state(dir / "s.shnw", s);
  const WaveState r = read_state(dir / "s.shnw");
  const Field pu = to_physical(s.u), pr = to_physical(r.u);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(pr.values()[i] == pu.values()[i]);

  std::stringstream bad("SHNX\x01");
  CHECK_THROWS_AS(read_field(bad), FormatError);
  std::stringstream cut(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_field(cut), FormatError);
}

TEST_CASE("CSV records round trip") {
  std::vector<DiagnosticsRecord> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].t = 0.1 * i + 1e-17;
    rows[i].E_total = std::numbers::pi * i;
    rows[i].X_accum = 1.0 / 3.0;
    rows[i].zero_mode_u = -2.5e-300;
  }
  rows[2].Y_probe = 7.0;
  rows[2].status = RecordStatus::blowup;
  std::stringstream ss;
  write_records(ss, rows);
  const std::string text = ss.str();
  CHECK(text.rfind("t,E_total,", 0) == 0);
  CHECK(text.find("nan") != std::string::npos);
  const auto back = read_records(ss);
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) {
    for (const auto& [name, member] : kRecordColumns) {
      const double a = rows[i].*member, b = back[i].*member;
      CHECK((a == b || (std::isnan(a) && std::isnan(b))));
    }
    CHECK(back[i].status == rows[i].status);
  }
  std::stringstream junk("t,E_total\n1,2\n");
  CHECK_THROWS_AS(read_records(junk), FormatError);
}

TEST_CASE("config parsing") {
  const SimConfig c = parse_config(kMinimal);
  CHECK(c.d == 3);
  CHECK(c.picard_iterations == 2);
  CHECK(c.L == doctest::Approx(kTwoPi));
  CHECK(c.formulation == Formulation::full_u);

  CHECK_THROWS_WITH_AS(parse_config(R"({"d": 3, "M": 8, "gamma": 3.0, "mu": 1, "dt": 0.01, "t_final": 1})"),
                       doctest::Contains("gamma"), ConfigError);
  try {
    parse_config(R"({"d": 3, "M": 8, "gamma": 1, "mu": 1, "dt": 0.01, "t_final": 1, "foo": 2})");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("foo") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"d": 3, "M": 8, "gamma": 1, "mu": 1, "dt": 0.01})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"d": 3, "M": 8, "gamma": 1, "mu": 1, "dt": 0.01, "t_final": 1,
                                  "noise": {"amplitude": 1, "colour": "red"}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);

  const SimConfig full = parse_config(R"({"d": 5, "M": 8, "gamma": 4, "mu": -1, "dt": 0.001, "t_final": 0.5,
    "noise": {"amplitude": 0.2, "cutoff": 4, "profile": "sobolev", "sobolev_s": 1.5},
    "formulation": "residual_v", "truncation_N": 4, "snapshot_times": [0.25]})");
  CHECK(full.noise.profile == NoiseProfile::sobolev);
  CHECK(*full.truncation_N == 4.0);
  CHECK(full.formulation == Formulation::residual_v);
  CHECK(parse_config(canonical_config(full)).noise.sobolev_s == 1.5);
  CHECK(canonical_config(parse_config(canonical_config(full))) == canonical_config(full));
}

TEST_CASE("config hash follows the content") {
  const SimConfig a = parse_config(kMinimal);
  SimConfig b = a;
  CHECK(config_hash(a) == config_hash(b));
  b.master_seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.noise.cutoff = 2.0;
  CHECK(config_hash(a) != config_hash(b));
  const SimConfig c = parse_config(R"({"t_final": 0.1, "dt": 0.01, "mu": 1.0, "gamma": 1.0, "M": 8, "d": 3})");
  CHECK(config_hash(a) == config_hash(c));
}

TEST_CASE("seed override from the environment") {
  const fs::path dir = scratch("seed");
  {
    std::ofstream(dir / "c.json") << R"({"d": 2, "M": 8, "gamma": 1, "mu": 1, "dt": 0.01, "t_final": 0.1,
      "master_seed": 3, "initial_data": {"kind": "snapshot", "path": "init.shnw"}})";
  }
  ::unsetenv("SHNW_SEED");
  const SimConfig a = load_config(dir / "c.json");
  CHECK(a.master_seed == 3);
  CHECK(fs::path(a.initial_data.path) == dir / "init.shnw");
  ::setenv("SHNW_SEED", "12345", 1);
  CHECK(load_config(dir / "c.json").master_seed == 12345);
  ::setenv("SHNW_SEED", "x1", 1);
  CHECK_THROWS_AS(load_config(dir / "c.json"), ConfigError);
  ::unsetenv("SHNW_SEED");
}

TEST_CASE("ensemble output and analysis agree") {
  const SimConfig cfg = small_ensemble();
  const fs::path dir = scratch("ens");
  const EnsembleResult res = run_ensemble(cfg, 2, dir);
  CHECK(res.failed == 0);
  CHECK(res.summary.count == 4);
  for (const char* f : {"manifest.json", "summary.json", "traj_0000.csv", "traj_0003.csv"})
    CHECK(fs::exists(dir / f));

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["artifact_version"] == std::string(kArtifactVersion));
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);

  const AnalysisResult an = analyze_directory(dir);
  CHECK(an.summary.count == 4);
  REQUIRE(an.summary.times.size() == res.summary.times.size());
  for (const auto& [k, v] : res.summary.means)
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double w = an.summary.means.at(k)[i];
      CHECK((std::abs(w - v[i]) <= 1e-12 * std::max(1.0, std::abs(v[i])) || (std::isnan(w) && std::isnan(v[i]))));
    }
  CHECK(an.drift.has_value());

  const EnsembleSummary js = summary_from_json(nlohmann::json::parse(slurp(dir / "summary.json")));
  CHECK(js.count == 4);
  CHECK(js.means.at("E_total") == res.summary.means.at("E_total"));
}

TEST_CASE("reruns are byte identical whatever the thread count") {
  const SimConfig cfg = small_ensemble();
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  run_ensemble(cfg, 1, a);
  run_ensemble(cfg, 3, b);
  for (const char* f : {"summary.json", "traj_0000.csv", "traj_0001.csv", "traj_0002.csv", "traj_0003.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("analysis rejects empty directories") {
  const fs::path dir = scratch("empty");
  CHECK_THROWS_AS(analyze_directory(dir), FormatError);
  CHECK_THROWS_AS(analyze_directory(dir / "missing"), FormatError);
}

}
