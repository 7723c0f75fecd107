#include <cerrno>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <set>
#include <sstream>

#include "shnw/errors.hpp"
#include "shnw/io.hpp"

namespace shnw {
namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError(prefix + key, "unknown key");
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

long long integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<long long>();
}

int small_int(const json& v, const std::string& key) {
  const long long x = integer(v, key);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(key, "integer out of range");
  return static_cast<int>(x);
}

std::uint64_t seed(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  throw ConfigError(key, "expected a nonnegative integer");
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

std::optional<double> optional_number(const json& v, const std::string& key) {
  if (v.is_null()) return std::nullopt;
  return number(v, key);
}

template <class E>
E choice(const json& v, const std::string& key, std::initializer_list<std::pair<const char*, E>> options) {
  const std::string s = text(v, key);
  std::string names;
  for (const auto& [name, value] : options) {
    if (s == name) return value;
    names += names.empty() ? "" : ", ";
    names += name;
  }
  throw ConfigError(key, "expected one of " + names);
}

void parse_noise(const json& j, NoiseConfig& n) {
  if (!j.is_object()) throw ConfigError("noise", "expected an object");
  reject_unknown(j, {"amplitude", "cutoff", "profile", "sobolev_s"}, "noise.");
  if (auto* v = find(j, "amplitude")) n.amplitude = number(*v, "noise.amplitude");
  if (auto* v = find(j, "cutoff")) n.cutoff = optional_number(*v, "noise.cutoff");
  if (auto* v = find(j, "profile"))
    n.profile = choice<NoiseProfile>(*v, "noise.profile",
                                     {{"flat", NoiseProfile::flat}, {"sobolev", NoiseProfile::sobolev}});
  if (auto* v = find(j, "sobolev_s")) n.sobolev_s = number(*v, "noise.sobolev_s");
}

void parse_initial(const json& j, InitialDataConfig& init) {
  if (!j.is_object()) throw ConfigError("initial_data", "expected an object");
  reject_unknown(j, {"kind", "path", "u0", "u1", "randomization"}, "initial_data.");
  if (auto* v = find(j, "kind"))
    init.kind = choice<InitialDataKind>(*v, "initial_data.kind",
                                        {{"zero", InitialDataKind::zero},
                                         {"snapshot", InitialDataKind::snapshot},
                                         {"randomized", InitialDataKind::randomized}});
  if (auto* v = find(j, "path")) init.path = text(*v, "initial_data.path");
  if (auto* v = find(j, "u0")) init.u0 = text(*v, "initial_data.u0");
  if (auto* v = find(j, "u1")) init.u1 = text(*v, "initial_data.u1");
  if (auto* r = find(j, "randomization")) {
    if (!r->is_object()) throw ConfigError("initial_data.randomization", "expected an object");
    reject_unknown(*r, {"window", "law", "seed"}, "initial_data.randomization.");
    auto& spec = init.randomization;
    if (auto* v = find(*r, "window"))
      spec.window = choice<Window>(*v, "initial_data.randomization.window",
                                   {{"raised_cosine", Window::raised_cosine}});
    if (auto* v = find(*r, "law"))
      spec.law = choice<CoefficientLaw>(*v, "initial_data.randomization.law",
                                        {{"gaussian", CoefficientLaw::gaussian},
                                         {"bernoulli", CoefficientLaw::bernoulli}});
    if (auto* v = find(*r, "seed")) spec.seed = seed(*v, "initial_data.randomization.seed");
  }
}

const char* name(NoiseProfile p) { return p == NoiseProfile::flat ? "flat" : "sobolev"; }
const char* name(Formulation f) { return f == Formulation::full_u ? "full_u" : "residual_v"; }
const char* name(CoefficientLaw l) { return l == CoefficientLaw::gaussian ? "gaussian" : "bernoulli"; }
const char* name(InitialDataKind k) {
  switch (k) {
    case InitialDataKind::zero: return "zero";
    case InitialDataKind::snapshot: return "snapshot";
    case InitialDataKind::randomized: return "randomized";
  }
  return "zero";
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

SimConfig parse_config(std::string_view text_in) {
  json j;
  try {
    j = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
  reject_unknown(j,
                 {"d", "M", "L", "gamma", "mu", "dt", "t_final", "sample_every", "truncation_N",
                  "picard_iterations", "dealias", "noise", "initial_data", "formulation",
                  "blowup_threshold", "trajectories", "master_seed", "snapshot_times", "hs_probe_s",
                  "hs_probe_delta"},
                 "");
  for (const char* key : {"d", "M", "gamma", "mu", "dt", "t_final"})
    if (!find(j, key)) throw ConfigError(key, "required key missing");

  SimConfig c;
  c.d = small_int(j["d"], "d");
  c.M = small_int(j["M"], "M");
  if (auto* v = find(j, "L")) c.L = number(*v, "L");
  c.gamma = number(j["gamma"], "gamma");
  c.mu = number(j["mu"], "mu");
  c.dt = number(j["dt"], "dt");
  c.t_final = number(j["t_final"], "t_final");
  if (auto* v = find(j, "sample_every")) c.sample_every = small_int(*v, "sample_every");
  if (auto* v = find(j, "truncation_N")) c.truncation_N = optional_number(*v, "truncation_N");
  if (auto* v = find(j, "picard_iterations")) c.picard_iterations = small_int(*v, "picard_iterations");
  if (auto* v = find(j, "dealias")) c.dealias = boolean(*v, "dealias");
  if (auto* v = find(j, "noise")) parse_noise(*v, c.noise);
  if (auto* v = find(j, "initial_data")) parse_initial(*v, c.initial_data);
  if (auto* v = find(j, "formulation"))
    c.formulation = choice<Formulation>(*v, "formulation",
                                        {{"full_u", Formulation::full_u},
                                         {"residual_v", Formulation::residual_v}});
  if (auto* v = find(j, "blowup_threshold")) c.blowup_threshold = number(*v, "blowup_threshold");
  if (auto* v = find(j, "trajectories")) c.trajectories = small_int(*v, "trajectories");
  if (auto* v = find(j, "master_seed")) c.master_seed = seed(*v, "master_seed");
  if (auto* v = find(j, "snapshot_times")) {
    if (!v->is_array()) throw ConfigError("snapshot_times", "expected an array");
    for (const auto& t : *v) c.snapshot_times.push_back(number(t, "snapshot_times"));
  }
  if (auto* v = find(j, "hs_probe_s")) c.hs_probe_s = number(*v, "hs_probe_s");
  if (auto* v = find(j, "hs_probe_delta")) c.hs_probe_delta = number(*v, "hs_probe_delta");

  // gamma is checked before the grid so the message is the documented one
  if (!(c.gamma > 0.0 && c.gamma < c.d))
    throw ConfigError("gamma", "potential exponent out of range: need 0 < gamma < d");
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config", e.what());
  }
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  SimConfig c = parse_config(ss.str());
  // data files are relative to the config
  const auto base = path.parent_path();
  for (std::string* p : {&c.initial_data.path, &c.initial_data.u0, &c.initial_data.u1})
    if (!p->empty() && std::filesystem::path(*p).is_relative()) *p = (base / *p).string();
  if (const char* env = std::getenv("SHNW_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long s = std::strtoull(env, &end, 10);
    if (*env == '\0' || *end != '\0' || errno != 0 || *env == '-')
      throw ConfigError("SHNW_SEED", "expected a nonnegative integer");
    c.master_seed = s;
  }
  return c;
}

nlohmann::json config_to_json(const SimConfig& c) {
  json j;
  j["d"] = c.d;
  j["M"] = c.M;
  j["L"] = c.L;
  j["gamma"] = c.gamma;
  j["mu"] = c.mu;
  j["dt"] = c.dt;
  j["t_final"] = c.t_final;
  j["sample_every"] = c.sample_every;
  j["truncation_N"] = optional_json(c.truncation_N);
  j["picard_iterations"] = c.picard_iterations;
  j["dealias"] = c.dealias;
  j["noise"] = {{"amplitude", c.noise.amplitude},
                {"cutoff", optional_json(c.noise.cutoff)},
                {"profile", name(c.noise.profile)},
                {"sobolev_s", c.noise.sobolev_s}};
  j["initial_data"] = {{"kind", name(c.initial_data.kind)},
                       {"path", c.initial_data.path},
                       {"u0", c.initial_data.u0},
                       {"u1", c.initial_data.u1},
                       {"randomization",
                        {{"window", "raised_cosine"},
                         {"law", name(c.initial_data.randomization.law)},
                         {"seed", c.initial_data.randomization.seed}}}};
  j["formulation"] = name(c.formulation);
  j["blowup_threshold"] = c.blowup_threshold;
  j["trajectories"] = c.trajectories;
  j["master_seed"] = c.master_seed;
  j["snapshot_times"] = c.snapshot_times;
  j["hs_probe_s"] = c.hs_probe_s;
  j["hs_probe_delta"] = c.hs_probe_delta;
  return j;
}

std::string canonical_config(const SimConfig& cfg) { return config_to_json(cfg).dump(); }

std::uint64_t config_hash(const SimConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace shnw
