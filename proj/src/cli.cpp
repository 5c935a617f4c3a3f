#include "atomcov/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <iostream>

#include "atomcov/errors.hpp"
#include "atomcov/hermlin.hpp"
#include "atomcov/io.hpp"

namespace atomcov {

namespace {

using nlohmann::json;

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  std::initializer_list<const char*> required, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
  for (const char* r : required)
    if (!j.contains(r)) throw ConfigError(where + ": missing key '" + r + "'");
}

LineSpectrumModel line_model_from_json(const json& j, const std::string& where) {
  LineSpectrumModel model;
  model.m = j.at("m").get<int>();
  model.frequencies = j.at("frequencies").get<std::vector<double>>();
  model.powers = j.at("powers").get<std::vector<double>>();
  model.noise_floor = j.value("noise_floor", 0.0);
  try {
    model.validate();
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return model;
}

JammerScenario scenario_from_json(const json& j, const std::string& where) {
  require_keys(j, {"m", "spacing", "jammer_deg", "jammer_power_db", "white_db"},
               {"m", "jammer_deg", "jammer_power_db"}, where);
  JammerScenario sc;
  sc.m = j.at("m").get<int>();
  sc.spacing = j.value("spacing", 0.5);
  sc.jammer_deg = j.at("jammer_deg").get<std::vector<double>>();
  sc.jammer_power_db = j.at("jammer_power_db").get<std::vector<double>>();
  sc.white_db = j.value("white_db", 0.0);
  try {
    sc.validate();
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return sc;
}

HermMat truth_from_model(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError(where + ": missing model type");
  const std::string type = j.at("type").get<std::string>();
  if (type == "line_spectrum") {
    require_keys(j, {"type", "m", "frequencies", "powers", "noise_floor"},
                 {"m", "frequencies", "powers"}, where);
    return cov_line_spectrum(line_model_from_json(j, where));
  }
  if (type == "kron_tbt") {
    require_keys(j, {"type", "l", "frequencies", "powers", "noise_floor"},
                 {"l", "frequencies", "powers"}, where);
    json base = j;
    base["m"] = j.at("l");
    base.erase("l");
    base["type"] = "line_spectrum";
    return cov_kron_tbt(cov_line_spectrum(line_model_from_json(base, where)));
  }
  if (type == "banded_pocs") {
    require_keys(j, {"type", "m", "b", "model_seed", "noise_floor"}, {"m", "b", "model_seed"},
                 where);
    return cov_banded_pocs(j.at("m").get<int>(), j.at("b").get<int>(),
                           j.at("model_seed").get<std::uint64_t>(), j.value("noise_floor", 1.0));
  }
  if (type == "jammer") {
    json sub = j;
    sub.erase("type");
    return jammer_cov(scenario_from_json(sub, where));
  }
  throw ConfigError(where + ": unknown model type '" + type + "'");
}

Atom1Options atom1_options_from_json(const json& j, const std::string& where) {
  require_keys(j, {"rho", "outer_tol", "inner_tol", "max_outer", "max_inner", "seed"}, {}, where);
  Atom1Options o;
  o.rho = j.value("rho", o.rho);
  o.outer_tol = j.value("outer_tol", o.outer_tol);
  o.inner_tol = j.value("inner_tol", o.inner_tol);
  o.max_outer = j.value("max_outer", o.max_outer);
  o.max_inner = j.value("max_inner", o.max_inner);
  o.seed = j.value("seed", o.seed);
  return o;
}

Atom2Options atom2_options_from_json(const json& j, const std::string& where) {
  require_keys(j, {"gamma0", "k1", "outer_tol", "max_outer", "dykstra_tol", "dykstra_max_iter",
                   "seed"},
               {}, where);
  Atom2Options o;
  o.gamma0 = j.value("gamma0", o.gamma0);
  o.k1 = j.value("k1", o.k1);
  o.outer_tol = j.value("outer_tol", o.outer_tol);
  o.max_outer = j.value("max_outer", o.max_outer);
  o.dykstra_tol = j.value("dykstra_tol", o.dykstra_tol);
  o.dykstra_max_iter = j.value("dykstra_max_iter", o.dykstra_max_iter);
  o.seed = j.value("seed", o.seed);
  return o;
}

MethodConfig method_from_json(const json& j, const std::string& where) {
  require_keys(j, {"name", "label", "spec", "options"}, {"name"}, where);
  MethodConfig mc;
  mc.name = j.at("name").get<std::string>();
  mc.label = j.value("label", mc.name);
  if (j.contains("spec")) mc.fit_spec = spec_from_json(j.at("spec"));
  const json opts = j.value("options", json::object());
  if (mc.name == "atom1") {
    mc.atom1 = atom1_options_from_json(opts, where + ".options");
  } else if (mc.name == "atom2") {
    mc.atom2 = atom2_options_from_json(opts, where + ".options");
  } else if (mc.name == "scm" || mc.name == "fb" || mc.name == "oracle") {
    if (!opts.empty()) throw ConfigError(where + ": method '" + mc.name + "' takes no options");
  } else {
    throw ConfigError(where + ": unknown method '" + mc.name + "'");
  }
  return mc;
}

std::vector<MethodConfig> methods_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array");
  std::vector<MethodConfig> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(method_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

int run_or_report(const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int cmd_estimate(const nlohmann::json& config, int jobs) {
  (void)jobs;
  return run_or_report([&]() -> int {
    require_keys(config,
                 {"input", "method", "spec", "options", "output_matrix", "output_report", "seed"},
                 {"input", "method", "output_matrix", "output_report"}, "estimate");
    const SnapshotSet samples = snapshots_from_csv(read_text_file(config.at("input")));
    const std::string method = config.at("method").get<std::string>();
    const json opts = config.value("options", json::object());

    int code = 0;
    HermMat r_hat;
    json report = json::object();
    if (method == "scm" || method == "fb") {
      if (!opts.empty()) throw ConfigError("estimate: method '" + method + "' takes no options");
      r_hat = method == "scm" ? scm(samples) : fb_average(scm(samples));
      report["method"] = method;
      report["m"] = samples.dim();
      report["n"] = samples.count();
      report["warnings"] = json::array();
      const Evd e = evd(r_hat);
      if (e.eigenvalues(0) <= 1e-12 * std::max(e.eigenvalues(e.eigenvalues.size() - 1), 1.0))
        report["warnings"].push_back("estimate is singular (n < m?)");
      report["converged"] = true;
    } else if (method == "atom1" || method == "atom2") {
      const DataFactor y = factor_data(fb_average(scm(samples)));
      FitReport fit;
      if (method == "atom1") {
        Atom1Options o = atom1_options_from_json(opts, "estimate.options");
        if (config.contains("seed")) o.seed = config.at("seed").get<std::uint64_t>();
        fit = atom1(y, o);
      } else {
        Atom2Options o = atom2_options_from_json(opts, "estimate.options");
        if (config.contains("seed")) o.seed = config.at("seed").get<std::uint64_t>();
        if (config.contains("spec")) o.spec = spec_from_json(config.at("spec"));
        fit = atom2(y, o);
      }
      r_hat = fit.r_hat;
      report = fit_report_to_json(fit);
      code = fit.exit_reason == "max_outer" ? 2 : 0;
    } else {
      throw ConfigError("estimate: unknown method '" + method + "'");
    }

    write_text_file_atomic(config.at("output_matrix"), matrix_to_csv(r_hat.mat()));
    write_text_file_atomic(config.at("output_report"), report.dump(2) + "\n");
    return code;
  });
}

int cmd_simulate(const nlohmann::json& config) {
  return run_or_report([&]() -> int {
    require_keys(config, {"model", "n", "seed", "output", "truth_output"},
                 {"model", "n", "seed", "output"}, "simulate");
    const HermMat truth = truth_from_model(config.at("model"), "simulate.model");
    const SnapshotSet samples = sample_snapshots(truth, config.at("n").get<int>(),
                                                 config.at("seed").get<std::uint64_t>());
    write_text_file_atomic(config.at("output"), snapshots_to_csv(samples));
    if (config.contains("truth_output"))
      write_text_file_atomic(config.at("truth_output"), matrix_to_csv(truth.mat()));
    return 0;
  });
}

namespace {

int bench_mse(const json& config, int jobs) {
  require_keys(config,
               {"model", "spec", "methods", "n_grid", "trials", "seed", "output_csv",
                "output_json"},
               {"model", "spec", "methods", "n_grid", "trials", "seed"}, "bench mse");
  const HermMat truth = truth_from_model(config.at("model"), "bench.model");
  const StructureSpec spec = spec_from_json(config.at("spec"));
  const BenchResult res = mse_benchmark(
      truth, spec, methods_from_json(config.at("methods"), "bench.methods"),
      config.at("n_grid").get<std::vector<int>>(), config.at("trials").get<int>(),
      config.at("seed").get<std::uint64_t>(), jobs);
  if (config.contains("output_csv"))
    write_text_file_atomic(config.at("output_csv"), bench_to_csv(res));
  if (config.contains("output_json"))
    write_text_file_atomic(config.at("output_json"), bench_to_json(res).dump(2) + "\n");
  if (!config.contains("output_csv") && !config.contains("output_json"))
    std::cout << bench_to_csv(res);
  return 0;
}

int bench_sinr(const json& config, int jobs) {
  require_keys(config,
               {"scenario", "methods", "n", "trials", "seed", "grid_points", "theta_deg",
                "output_csv", "output_json"},
               {"scenario", "methods", "n", "trials", "seed"}, "bench sinr");
  const JammerScenario sc = scenario_from_json(config.at("scenario"), "bench.scenario");
  std::vector<double> grid;
  if (config.contains("theta_deg"))
    grid = config.at("theta_deg").get<std::vector<double>>();
  else
    grid = default_theta_grid(config.value("grid_points", 500));
  const SinrResult res = sinr_experiment(
      sc, methods_from_json(config.at("methods"), "bench.methods"), config.at("n").get<int>(),
      config.at("trials").get<int>(), grid, config.at("seed").get<std::uint64_t>(), jobs);
  if (config.contains("output_csv"))
    write_text_file_atomic(config.at("output_csv"), sinr_to_csv(res));
  if (config.contains("output_json"))
    write_text_file_atomic(config.at("output_json"), sinr_to_json(res).dump(2) + "\n");
  if (!config.contains("output_csv") && !config.contains("output_json"))
    std::cout << sinr_to_csv(res);
  return 0;
}

int bench_convergence(const json& config) {
  require_keys(config, {"model", "n", "seed", "methods", "output_csv"},
               {"model", "n", "seed", "output_csv"}, "bench convergence");
  const HermMat truth = truth_from_model(config.at("model"), "bench.model");
  const SnapshotSet samples =
      sample_snapshots(truth, config.at("n").get<int>(), config.at("seed").get<std::uint64_t>());
  std::vector<MethodConfig> methods;
  if (config.contains("methods")) {
    methods = methods_from_json(config.at("methods"), "bench.methods");
  } else {
    MethodConfig m1, m2;
    m1.name = "atom1";
    m1.label = "atom1";
    m2.name = "atom2";
    m2.label = "atom2";
    methods = {m1, m2};
  }
  const DataFactor y = factor_data(fb_average(scm(samples)));
  std::string csv = "method,outer,objective,neg_ll,gamma\n";
  char buf[160];
  for (const auto& mc : methods) {
    FitReport fit;
    if (mc.name == "atom1") {
      fit = atom1(y, mc.atom1);
    } else if (mc.name == "atom2") {
      Atom2Options o = mc.atom2;
      o.spec = mc.fit_spec;
      fit = atom2(y, o);
    } else {
      throw ConfigError("bench convergence: method must be atom1 or atom2");
    }
    for (size_t t = 0; t < fit.objective_trace.size(); ++t) {
      const double gamma = (t > 0 && t - 1 < fit.gamma_trace.size()) ? fit.gamma_trace[t - 1]
                                                                     : 0.0;
      std::snprintf(buf, sizeof(buf), "%s,%zu,%.17g,%.17g,%.17g\n", mc.label.c_str(), t,
                    fit.objective_trace[t], fit.neg_ll_trace[t], gamma);
      csv += buf;
    }
  }
  write_text_file_atomic(config.at("output_csv"), csv);
  return 0;
}

}  // namespace

int cmd_bench(const std::string& task, const nlohmann::json& config, int jobs) {
  return run_or_report([&]() -> int {
    if (task == "mse") return bench_mse(config, jobs);
    if (task == "sinr") return bench_sinr(config, jobs);
    if (task == "convergence") return bench_convergence(config);
    throw ConfigError("bench: unknown task '" + task + "' (expected mse|sinr|convergence)");
  });
}

int cmd_crb(const nlohmann::json& config) {
  return run_or_report([&]() -> int {
    require_keys(config, {"spec", "n", "matrix", "model", "output"}, {"spec", "n"}, "crb");
    const StructureSpec spec = spec_from_json(config.at("spec"));
    const int n = config.at("n").get<int>();
    if (n < 1) throw ConfigError("crb: n must be positive");
    HermMat r;
    if (config.contains("matrix")) {
      r = HermMat(matrix_from_csv(read_text_file(config.at("matrix"))));
    } else if (config.contains("model")) {
      r = truth_from_model(config.at("model"), "crb.model");
    } else {
      throw ConfigError("crb: need 'matrix' or 'model'");
    }
    if (r.dim() != spec.m) throw ConfigError("crb: matrix size does not match spec");
    const BasisSet basis = derivs_for(spec);
    const CrbResult res = crb_trace(fim(r, basis, n));
    json out;
    out["spec"] = spec_to_json(spec);
    out["n"] = n;
    out["crb"] = res.crb;
    out["condition"] = res.condition;
    out["warnings"] = res.warnings;
    const std::string text = out.dump(2) + "\n";
    if (config.contains("output"))
      write_text_file_atomic(config.at("output"), text);
    else
      std::cout << text;
    return 0;
  });
}

nlohmann::json load_config(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
}

void apply_override(nlohmann::json& config, const std::string& assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like key.path=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(value);
  } catch (const std::exception&) {
    parsed = value;  // keep as string
  }
  nlohmann::json* node = &config;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError("override has an empty path segment: " + assignment);
    if (dot == std::string::npos) {
      (*node)[key] = parsed;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

int default_jobs() {
  const char* env = std::getenv("ATOMCOV_JOBS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  return v > 0 ? v : 1;
}

}  // namespace atomcov
