#include "gbcal/bench/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "gbcal/lrate/select.hpp"

namespace gbcal {

namespace {

using nlohmann::json;

const char* kExperimentNames[] = {"toy_curve", "linear_dependent", "linear_t",
                                  "logistic_mcid", "gibbs_mcid"};
const char* kMethodNames[] = {"GPC", "SafeBayes", "HolmesWalker", "Lyddon"};

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void reject_unknown_keys(const json& obj, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const auto& k : known)
      if (item.key() == k) { ok = true; break; }
    if (!ok) fail("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
T get_scalar(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail("key '" + key + "' has the wrong type");
  }
}

template <typename T>
std::vector<T> get_list(const json& obj, const std::string& key,
                        std::vector<T> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array()) fail("key '" + key + "' must be a list");
  std::vector<T> out;
  for (const auto& e : v) {
    try {
      out.push_back(e.get<T>());
    } catch (const json::exception&) {
      fail("list '" + key + "' has an element of the wrong type");
    }
  }
  return out;
}

}  // namespace

std::string experiment_name(Experiment e) {
  return kExperimentNames[static_cast<int>(e)];
}

Experiment parse_experiment(const std::string& name) {
  for (int i = 0; i < 5; ++i)
    if (name == kExperimentNames[i]) return static_cast<Experiment>(i);
  fail("unknown experiment '" + name + "'");
}

std::string method_name(Method m) { return kMethodNames[static_cast<int>(m)]; }

Method parse_method(const std::string& name) {
  for (int i = 0; i < 4; ++i)
    if (name == kMethodNames[i]) return static_cast<Method>(i);
  fail("unknown method '" + name + "'");
}

bool method_supported(Experiment e, Method m) {
  if (e == Experiment::GibbsMcid)
    return m == Method::Gpc || m == Method::SafeBayes;
  return true;
}

std::vector<Method> default_methods(Experiment e) {
  std::vector<Method> out;
  for (int i = 0; i < 4; ++i) {
    const Method m = static_cast<Method>(i);
    if (method_supported(e, m)) out.push_back(m);
  }
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) fail("replications must be >= 1");
  if (cfg.degrees.empty()) fail("degrees must be non-empty");
  const int max_degree = cfg.experiment == Experiment::ToyCurve ? 10 : 3;
  for (int d : cfg.degrees)
    if (d < 1 || d > max_degree)
      fail("degree " + std::to_string(d) + " out of range 1.." +
           std::to_string(max_degree) + " for " + experiment_name(cfg.experiment));
  if (cfg.sample_sizes.empty()) fail("sample_sizes must be non-empty");
  for (int n : cfg.sample_sizes)
    if (n < 2) fail("sample sizes must be >= 2");
  if (cfg.methods.empty()) fail("methods must be non-empty");
  for (Method m : cfg.methods)
    if (!method_supported(cfg.experiment, m))
      fail("method " + method_name(m) + " is not defined for " +
           experiment_name(cfg.experiment));
  for (std::size_t i = 0; i < cfg.methods.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.methods.size(); ++j)
      if (cfg.methods[i] == cfg.methods[j]) fail("duplicate method in config");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("alpha must lie in (0,1)");
  if (cfg.safebayes_grid.empty()) fail("safebayes_grid must be non-empty");
  for (double g : cfg.safebayes_grid)
    if (!(g > 0.0)) fail("safebayes_grid entries must be positive");
  if (cfg.posterior_draws < 100) fail("posterior_draws must be >= 100");
  if (cfg.workers < 1) fail("workers must be >= 1");
  if (cfg.out_path.empty()) fail("out_path must be non-empty");
  if (cfg.gpc.B < 1) fail("gpc.B must be >= 1");
  if (cfg.gpc.max_iter < 1) fail("gpc.max_iter must be >= 1");
  if (!(cfg.gpc.eta_min > 0.0 && cfg.gpc.eta_max > cfg.gpc.eta_min))
    fail("gpc eta bounds must satisfy 0 < eta_min < eta_max");
  if (!(cfg.gpc.k0 > 0.0)) fail("gpc.k0 must be positive");
  if (!(cfg.gpc.stop_tol > 0.0)) fail("gpc.stop_tol must be positive");
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("config must be a JSON object");
  reject_unknown_keys(j,
                      {"experiment", "degrees", "sample_sizes", "replications",
                       "methods", "alpha", "gpc", "safebayes_grid",
                       "posterior_draws", "base_seed", "workers", "out_path"},
                      "config");
  if (!j.contains("experiment")) fail("config requires an 'experiment' key");

  ExperimentConfig cfg;
  cfg.experiment = parse_experiment(get_scalar<std::string>(j, "experiment", ""));

  std::vector<int> default_degrees;
  if (cfg.experiment == Experiment::ToyCurve)
    for (int d = 1; d <= 10; ++d) default_degrees.push_back(d);
  else
    default_degrees = {1, 2, 3};
  cfg.degrees = get_list<int>(j, "degrees", default_degrees);

  const std::vector<int> default_n = cfg.experiment == Experiment::ToyCurve
                                         ? std::vector<int>{100, 800}
                                         : std::vector<int>{100, 200, 400};
  cfg.sample_sizes = get_list<int>(j, "sample_sizes", default_n);
  cfg.replications = get_scalar<int>(j, "replications", cfg.replications);

  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : get_list<std::string>(j, "methods", {}))
      cfg.methods.push_back(parse_method(name));
  } else {
    cfg.methods = default_methods(cfg.experiment);
  }

  cfg.alpha = get_scalar<double>(j, "alpha", cfg.alpha);
  if (j.contains("gpc")) {
    const json& g = j.at("gpc");
    if (!g.is_object()) fail("'gpc' must be an object");
    reject_unknown_keys(g,
                        {"B", "eta0", "k0", "step_exponent", "max_iter",
                         "eta_min", "eta_max", "stop_tol", "fresh_pool"},
                        "gpc");
    cfg.gpc.B = get_scalar<int>(g, "B", cfg.gpc.B);
    cfg.gpc.eta0 = get_scalar<double>(g, "eta0", cfg.gpc.eta0);
    cfg.gpc.k0 = get_scalar<double>(g, "k0", cfg.gpc.k0);
    cfg.gpc.step_exponent = get_scalar<double>(g, "step_exponent", cfg.gpc.step_exponent);
    cfg.gpc.max_iter = get_scalar<int>(g, "max_iter", cfg.gpc.max_iter);
    cfg.gpc.eta_min = get_scalar<double>(g, "eta_min", cfg.gpc.eta_min);
    cfg.gpc.eta_max = get_scalar<double>(g, "eta_max", cfg.gpc.eta_max);
    cfg.gpc.stop_tol = get_scalar<double>(g, "stop_tol", cfg.gpc.stop_tol);
    cfg.gpc.fresh_pool = get_scalar<bool>(g, "fresh_pool", cfg.gpc.fresh_pool);
  }
  cfg.gpc.alpha = cfg.alpha;

  cfg.safebayes_grid = get_list<double>(j, "safebayes_grid", default_safebayes_grid());
  cfg.posterior_draws = get_scalar<int>(j, "posterior_draws", cfg.posterior_draws);
  cfg.base_seed = get_scalar<std::uint64_t>(j, "base_seed", cfg.base_seed);
  cfg.workers = get_scalar<int>(j, "workers", cfg.workers);
  cfg.out_path = get_scalar<std::string>(j, "out_path", cfg.out_path);

  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gbcal
