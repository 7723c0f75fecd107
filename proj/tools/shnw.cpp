// shnw: run, ensemble, verify, exponents, analyze.

#include <cstdio>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "shnw/diagnostics.hpp"
#include "shnw/errors.hpp"
#include "shnw/io.hpp"
#include "shnw/verify.hpp"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

int fail(const std::string& kind, const std::string& message, json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  std::cerr << extra.dump() << '\n';
  return 1;
}

json fit_json(const shnw::DriftFit& f) {
  return {{"slope", f.slope}, {"std_error", f.std_error}, {"intercept", f.intercept}, {"points", f.points}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Hartree wave simulator"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir, level = "quick", dir;
  std::size_t traj = 0;
  unsigned jobs = 0;
  int dim = 5;
  std::vector<int> only;

  auto* run = app.add_subcommand("run", "integrate one trajectory");
  run->add_option("config", cfg_path, "config JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--traj", traj, "trajectory index");
  run->add_option("--out", out_dir, "output directory");

  auto* ens = app.add_subcommand("ensemble", "integrate every trajectory and summarize");
  ens->add_option("config", cfg_path, "config JSON")->required()->check(CLI::ExistingFile);
  ens->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  ens->add_option("--out", out_dir, "output directory");

  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  ver->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  ver->add_option("--only", only, "check ids to run");

  auto* exps = app.add_subcommand("exponents", "print the (q, r) Strichartz pair");
  exps->add_option("d", dim, "dimension (>= 5)")->required();

  auto* ana = app.add_subcommand("analyze", "recompute the summary from stored CSVs");
  ana->add_option("dir", dir, "ensemble output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const shnw::SimConfig cfg = shnw::load_config(cfg_path);
      if (out_dir.empty()) out_dir = "out_run";
      try {
        const auto res = shnw::run_single(cfg, traj, out_dir);
        json j{{"status", std::string(shnw::to_string(res.record.status))},
               {"samples", res.record.u.size()},
               {"output_dir", out_dir}};
        if (res.record.blowup_time) j["blowup_time"] = *res.record.blowup_time;
        std::cout << j.dump() << '\n';
      } catch (const shnw::TrajectoryError& e) {
        return fail("integration", e.what(), {{"samples", e.partial().u.size()}, {"output_dir", out_dir}});
      }
      return 0;
    }
    if (*ens) {
      const shnw::SimConfig cfg = shnw::load_config(cfg_path);
      if (out_dir.empty()) out_dir = "out_ensemble";
      const auto res = shnw::run_ensemble(cfg, jobs, out_dir);
      json j{{"count", res.summary.count}, {"failed", res.failed}, {"output_dir", out_dir}};
      std::cout << j.dump() << '\n';
      return 0;
    }
    if (*ver) {
      const auto lvl = level == "full" ? shnw::verify::Level::full : shnw::verify::Level::quick;
      bool ok = true;
      shnw::verify::run_checks(lvl, only, [&](const shnw::verify::CheckResult& r) {
        ok = ok && r.pass;
        std::cout << shnw::verify::format_line(r) << std::endl;
      });
      return ok ? 0 : 1;
    }
    if (*exps) {
      const auto e = shnw::strichartz_exponents(dim);
      const auto show = [](const shnw::Rational& r) {
        return r.den == 1 ? std::to_string(r.num) : std::to_string(r.num) + "/" + std::to_string(r.den);
      };
      std::cout << "q=" << show(e.q) << " r=" << show(e.r) << '\n';
      return 0;
    }
    if (*ana) {
      const auto res = shnw::analyze_directory(dir);
      json j = shnw::summary_to_json(res.summary);
      if (res.drift) j["ito_fit"] = fit_json(*res.drift);
      std::cout << j.dump(2) << '\n';
      return 0;
    }
  } catch (const shnw::ConfigError& e) {
    return fail("config", e.what(), {{"key", e.field()}});
  } catch (const shnw::FormatError& e) {
    return fail("format", e.what());
  } catch (const shnw::DomainError& e) {
    return fail("domain", e.what());
  } catch (const shnw::IntegrationError& e) {
    return fail("integration", e.what(), {{"time_reached", e.time_reached()}});
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
