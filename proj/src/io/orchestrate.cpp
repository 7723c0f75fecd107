#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <mutex>
#include <regex>
#include <thread>

#include "shnw/errors.hpp"
#include "shnw/io.hpp"

namespace shnw {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string traj_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "traj_%04zu", index);
  return buf;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("missing " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<double> doubles(const json& arr) {
  std::vector<double> out;
  for (const auto& v : arr)
    out.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
  return out;
}

std::optional<DriftFit> try_drift_fit(const EnsembleSummary& s,
                                      std::span<const std::vector<DiagnosticsRecord>> paths) {
  if (s.times.size() < 5 || s.count < 2) return std::nullopt;
  try {
    // t = 0 is skipped: with deterministic data its spread is zero
    return ito_drift_fit(s, paths, s.times[1], s.times.back());
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

nlohmann::json summary_to_json(const EnsembleSummary& s) {
  json j;
  j["times"] = s.times;
  j["means"] = json::object();
  j["variances"] = json::object();
  for (const auto& [k, v] : s.means) j["means"][k] = v;
  for (const auto& [k, v] : s.variances) j["variances"][k] = v;
  j["count"] = s.count;
  return j;
}

EnsembleSummary summary_from_json(const nlohmann::json& j) {
  EnsembleSummary s;
  try {
    s.times = doubles(j.at("times"));
    for (const auto& [k, v] : j.at("means").items()) s.means[k] = doubles(v);
    for (const auto& [k, v] : j.at("variances").items()) s.variances[k] = doubles(v);
    s.count = j.at("count").get<std::size_t>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad summary JSON: ") + e.what());
  }
  return s;
}

nlohmann::json manifest_json(const SimConfig& cfg, const fs::path& output_dir) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  return json{{"config", config_to_json(cfg)},
              {"output_dir", output_dir.string()},
              {"created_at", stamp},
              {"artifact_version", std::string(kArtifactVersion)},
              {"config_hash", hash}};
}

std::vector<fs::path> write_trajectory(const fs::path& dir, const TrajectoryRecord& rec) {
  std::vector<fs::path> written;
  const std::string stem = traj_stem(rec.index);
  written.push_back(dir / (stem + ".csv"));
  write_records(written.back(), rec.u);
  if (!rec.v.empty()) {
    written.push_back(dir / (stem + "_v.csv"));
    write_records(written.back(), rec.v);
    written.push_back(dir / (stem + "_psi.csv"));
    write_records(written.back(), rec.psi);
  }
  for (const WaveState& s : rec.snapshots) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "_t%.6f.shnw", s.t);
    written.push_back(dir / (stem + buf));
    write_state(written.back(), s);
  }
  return written;
}

RunResult run_single(const SimConfig& cfg, std::size_t index, const fs::path& dir) {
  fs::create_directories(dir);
  write_json(dir / "manifest.json", manifest_json(cfg, dir));
  try {
    TrajectoryRecord rec = run_trajectory(cfg, index);
    write_trajectory(dir, rec);
    return {std::move(rec), dir};
  } catch (const TrajectoryError& e) {
    write_trajectory(dir, e.partial());
    throw;
  }
}

EnsembleResult simulate_ensemble(const SimConfig& cfg, unsigned jobs) {
  cfg.validate();
  const std::size_t n = static_cast<std::size_t>(cfg.trajectories);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));

  std::vector<std::optional<TrajectoryRecord>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i] = run_trajectory(cfg, i);
      } catch (const TrajectoryError& e) {
        slots[i] = e.partial();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  EnsembleResult out;
  std::vector<std::vector<DiagnosticsRecord>> ok;
  for (auto& s : slots) {
    if (s->status == RecordStatus::failed)
      ++out.failed;
    else
      ok.push_back(s->u);
    out.records.push_back(std::move(*s));
  }
  if (ok.empty()) throw IntegrationError("every trajectory failed", 0.0);
  out.summary = summarize(ok);
  return out;
}

EnsembleResult run_ensemble(const SimConfig& cfg, unsigned jobs, const fs::path& dir) {
  EnsembleResult res = simulate_ensemble(cfg, jobs);
  fs::create_directories(dir);
  write_json(dir / "manifest.json", manifest_json(cfg, dir));
  for (const auto& rec : res.records) write_trajectory(dir, rec);
  write_json(dir / "summary.json", summary_to_json(res.summary));
  return res;
}

AnalysisResult analyze_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw FormatError("not a directory: " + dir.string());
  (void)read_json(dir / "manifest.json");
  static const std::regex pattern(R"(traj_(\d+)\.csv)");
  std::vector<std::pair<std::size_t, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) files.emplace_back(std::stoul(m[1].str()), entry.path());
  }
  if (files.empty()) throw FormatError("no trajectory CSV files in " + dir.string());
  std::sort(files.begin(), files.end());

  std::vector<std::vector<DiagnosticsRecord>> paths;
  for (const auto& [index, path] : files) {
    auto rows = read_records(path);
    if (rows.empty() || rows.back().status == RecordStatus::failed) continue;
    paths.push_back(std::move(rows));
  }
  if (paths.empty()) throw FormatError("every trajectory in " + dir.string() + " failed");
  AnalysisResult out;
  out.summary = summarize(paths);
  out.drift = try_drift_fit(out.summary, paths);
  return out;
}

}  // namespace shnw
