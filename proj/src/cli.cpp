#include "ibrw/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "ibrw/bridge.hpp"
#include "ibrw/errors.hpp"
#include "ibrw/experiments.hpp"
#include "ibrw/io.hpp"
#include "ibrw/prediction.hpp"
#include "ibrw/simulate.hpp"

namespace ibrw {

namespace {

struct Common {
  std::string out;
  std::string manifest;
  int threads = 0;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  const Common& common;
};

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

Json make_manifest(const std::string& command, const Json& config) {
  Json m;
  m["command"] = command;
  m["config"] = config;
  m["tool_version"] = IBRW_VERSION;
  m["timestamp"] = timestamp();
  return m;
}

/// Accepts a bare manifest or any output document that embeds one.
Json load_manifest_config(const std::string& path, const std::string& command) {
  Json doc = read_json(path);
  if (doc.is_object() && doc.contains("manifest")) doc = doc["manifest"];
  if (!doc.is_object() || !doc.contains("command") || !doc.contains("config"))
    throw InputError(path + " is not a run manifest");
  if (doc["command"] != command)
    throw InputError(path + " is a manifest for '" + doc["command"].get<std::string>() +
                     "', not '" + command + "'");
  return doc["config"];
}

std::uint64_t resolve_cap(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("IBRW_CAP")) {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw InputError(std::string("IBRW_CAP is not an integer: ") + env);
    return value;
  }
  return kDefaultParticleCap;
}

void log_stage(const Context& ctx, const std::string& command, const std::string& message) {
  ctx.err << "ibrw " << command << ": " << message << '\n';
}

void emit(const Context& ctx, const std::string& path, const std::string& text) {
  if (path.empty())
    ctx.out << text;
  else
    write_text(path, text);
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

void write_manifest_sidecar(const std::string& path, const Json& manifest) {
  write_text(path + ".manifest.json", dump(manifest));
}

std::uint32_t trials_from(const Json& config) {
  const auto trials = config.at("trials").get<std::int64_t>();
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (trials > std::numeric_limits<std::uint32_t>::max())
    throw ValidationError("trials must fit in 32 bits");
  return static_cast<std::uint32_t>(trials);
}

template <class T>
T value_or(const Json& doc, const char* key, T fallback) {
  return doc.contains(key) ? doc.at(key).get<T>() : fallback;
}

// hull

void run_hull(const Context& ctx, const Json& config) {
  const VarianceProfile profile = profile_from_json(config.at("profile"));
  const EffectiveProfile eff = concave_hull(profile, config.at("tol").get<double>());
  log_stage(ctx, "hull", std::to_string(eff.segments()) + " effective segment(s)");
  Json doc = to_json(eff);
  doc["manifest"] = make_manifest("hull", config);
  emit(ctx, ctx.common.out, dump(doc));
}

// predict

void run_predict(const Context& ctx, const Json& config, const std::string& table) {
  const VarianceProfile profile = profile_from_json(config.at("profile"));
  const EffectiveProfile eff = concave_hull(profile);
  const auto n = config.at("n").get<std::int64_t>();
  const int b = config.at("branching").get<int>();
  const TimeMode tm = time_mode_from_string(config.at("time_mode").get<std::string>());
  const std::string mode_name = config.at("mode").get<std::string>();
  const CorrectionMode mode =
      mode_name == "auto" ? default_mode(eff) : correction_mode_from_string(mode_name);
  const PredictionReport report = predict_max(eff, n, mode, b, tm);
  log_stage(ctx, "predict", "M_n^*(n) = " + format_double(report.second_order_total));

  const Json manifest = make_manifest("predict", config);
  Json doc = to_json(report);
  doc["manifest"] = manifest;
  emit(ctx, ctx.common.out, dump(doc));

  if (!table.empty()) {
    std::ostringstream csv;
    csv << "k,path,barrier\n";
    for (std::int64_t k = 0; k <= n; ++k) {
      const auto bar = try_barrier(eff, n, k, b, tm);
      csv << k << ',' << format_double(optimal_path(eff, n, k, b, tm)) << ','
          << (bar ? format_double(*bar) : "null") << '\n';
    }
    write_text(table, csv.str());
    write_manifest_sidecar(table, manifest);
  }
}

// simulate

BrwConfig brw_config_from(const Json& config, int threads) {
  BrwConfig c;
  c.profile = profile_from_json(config.at("profile"));
  c.n = config.at("n").get<int>();
  c.branching = config.at("branching").get<int>();
  c.seed = config.at("seed").get<std::uint64_t>();
  c.trials = trials_from(config);
  c.cap = config.at("cap").get<std::uint64_t>();
  c.time_mode = time_mode_from_string(value_or<std::string>(config, "time_mode", "strict"));
  c.threads = threads;
  return c;
}

void run_simulate(const Context& ctx, const Json& config, std::string summary_path) {
  const BrwConfig c = brw_config_from(config, ctx.common.threads);
  validate(c);
  log_stage(ctx, "simulate",
            std::to_string(c.trials) + " trial(s) at n=" + std::to_string(c.n));
  const MaxSummary s = monte_carlo_max(c);

  std::ostringstream csv;
  csv << "trial,max,recentered\n";
  for (Eigen::Index i = 0; i < s.maxima.size(); ++i)
    csv << i << ',' << format_double(s.maxima[i]) << ',' << format_double(s.recentered[i]) << '\n';
  write_text(ctx.common.out, csv.str());

  const Json manifest = make_manifest("simulate", config);
  Json summary;
  summary["trials"] = c.trials;
  summary["median"] = s.median;
  summary["mean"] = s.mean;
  summary["q05"] = s.q05;
  summary["q25"] = s.q25;
  summary["q75"] = s.q75;
  summary["q95"] = s.q95;
  summary["prediction"] = s.prediction;
  summary["mode"] = to_string(s.mode);
  summary["manifest"] = manifest;
  if (summary_path.empty()) summary_path = ctx.common.out + ".summary.json";
  write_text(summary_path, dump(summary));
  write_manifest_sidecar(ctx.common.out, manifest);
  log_stage(ctx, "simulate", "median " + format_double(s.median) + ", prediction " +
                                 format_double(s.prediction));
}

// verify-bridge / verify-walk

std::vector<std::int64_t> lengths_from(const Json& config) {
  auto lengths = config.at("lengths").get<std::vector<std::int64_t>>();
  if (lengths.empty()) throw ValidationError("lengths must not be empty");
  return lengths;
}

std::string estimate_row(std::int64_t length, const EstimateSample& e, double scaled) {
  std::ostringstream row;
  row << length << ',' << format_double(e.p_hat) << ',' << format_double(e.ci_low) << ','
      << format_double(e.ci_high) << ',' << format_double(scaled) << '\n';
  return row.str();
}

constexpr const char* kEstimateHeader = "length,p_hat,ci_low,ci_high,scaled\n";

void finish_estimates(const Context& ctx, const std::string& command, const Json& config,
                      const std::string& csv) {
  emit(ctx, ctx.common.out, csv);
  if (!ctx.common.out.empty()) write_manifest_sidecar(ctx.common.out, make_manifest(command, config));
}

void run_verify_bridge(const Context& ctx, const Json& config) {
  const double sigma = config.at("sigma").get<double>();
  const double d = config.at("D").get<double>();
  const double z = config.at("z").get<double>();
  const std::uint64_t trials = trials_from(config);
  const MonteCarloOptions opts{config.at("seed").get<std::uint64_t>(), ctx.common.threads};
  std::string csv = kEstimateHeader;
  for (std::int64_t length : lengths_from(config)) {
    log_stage(ctx, "verify-bridge", "length " + std::to_string(length));
    const EstimateSample e = bridge_barrier_survival({0, length, sigma}, {d, z}, trials, opts);
    csv += estimate_row(length, e, e.p_hat * static_cast<double>(length) / ((1 + z) * (1 + z)));
  }
  finish_estimates(ctx, "verify-bridge", config, csv);
}

void run_verify_walk(const Context& ctx, const Json& config) {
  const std::string kind = config.at("kind").get<std::string>();
  const double sigma = config.at("sigma").get<double>();
  const double z = config.at("z").get<double>();
  const std::uint64_t trials = trials_from(config);
  const MonteCarloOptions opts{config.at("seed").get<std::uint64_t>(), ctx.common.threads};
  const auto lengths = lengths_from(config);
  std::string csv = kEstimateHeader;

  if (kind == "passage") {
    std::int64_t horizon = 0;
    for (auto j : lengths) {
      if (j < 1) throw ValidationError("first passage step j must be at least 1");
      horizon = std::max(horizon, j);
    }
    log_stage(ctx, "verify-walk", "first passage up to " + std::to_string(horizon));
    const FirstPassageProfile fp = first_passage_profile(sigma, z, horizon, trials, opts);
    for (auto j : lengths) {
      const EstimateSample e = fp.window(j);
      csv += estimate_row(j, e, e.p_hat * std::pow(static_cast<double>(j), 1.5) / (z + 1));
    }
  } else if (kind == "barrier" || kind == "ruin") {
    const double d = config.at("D").get<double>();
    for (auto t : lengths) {
      log_stage(ctx, "verify-walk", kind + " t=" + std::to_string(t));
      const EstimateSample e = kind == "barrier"
                                   ? walk_barrier_survival(sigma, d, z, t, trials, opts)
                                   : gambler_ruin_survival(sigma, z, t, trials, opts);
      csv += estimate_row(t, e, e.p_hat * std::sqrt(static_cast<double>(t)) / (1 + z));
    }
  } else {
    throw InputError("unknown walk kind '" + kind + "' (expected barrier, ruin or passage)");
  }
  finish_estimates(ctx, "verify-walk", config, csv);
}

// experiment

VarianceProfile plan_profile(const Json& plan) {
  if (!plan.contains("profile")) return VarianceProfile::homogeneous();
  return profile_from_json(plan.at("profile"));
}

std::vector<int> plan_ns(const Json& plan) {
  auto ns = plan.at("ns").get<std::vector<int>>();
  if (ns.empty()) throw ValidationError("plan must list at least one n");
  return ns;
}

std::uint64_t plan_cap(const Json& plan, std::uint64_t fallback) {
  return value_or<std::uint64_t>(plan, "cap", fallback);
}

Json run_tightness(const Context& ctx, const Json& plan, std::ostringstream& csv) {
  std::vector<BrwConfig> configs;
  for (int n : plan_ns(plan)) {
    BrwConfig c;
    c.profile = plan_profile(plan);
    c.n = n;
    c.branching = value_or(plan, "branching", 2);
    c.seed = value_or<std::uint64_t>(plan, "seed", 0);
    c.trials = trials_from(plan);
    c.cap = plan_cap(plan, kDefaultParticleCap);
    c.threads = ctx.common.threads;
    validate(c);
    configs.push_back(c);
  }
  log_stage(ctx, "experiment", "tightness over " + std::to_string(configs.size()) + " n value(s)");
  const auto rows = tightness_study(configs);
  csv << "n,trials,median,mean,iqr,prediction,recentered_median,plain_prediction,"
         "plain_recentered_median\n";
  for (const auto& r : rows)
    csv << r.n << ',' << r.trials << ',' << format_double(r.median) << ','
        << format_double(r.mean) << ',' << format_double(r.iqr) << ','
        << format_double(r.prediction) << ',' << format_double(r.recentered_median) << ','
        << format_double(r.plain_prediction) << ',' << format_double(r.plain_recentered_median)
        << '\n';
  return Json::object();
}

Json run_lower_bound(const Context& ctx, const Json& plan, std::ostringstream& csv) {
  const VarianceProfile profile = plan_profile(plan);
  const double cf = value_or(plan, "cf", 3.0);
  const bool strict = value_or(plan, "require_below_hull", true);
  const int b = value_or(plan, "branching", 2);
  const std::uint32_t trials = trials_from(plan);
  const auto seed = value_or<std::uint64_t>(plan, "seed", 0);
  csv << "n,t1,window_low,window_high,mean,second_moment,ratio,degenerate\n";
  for (int n : plan_ns(plan)) {
    LowerBoundSetup setup = make_lower_bound_setup(profile, n, cf, strict, b);
    setup.cap = plan_cap(plan, kDefaultParticleCap);
    log_stage(ctx, "experiment", "lower-bound n=" + std::to_string(n));
    const MomentEstimate est = paley_zygmund_ratio(setup, trials, seed, ctx.common.threads);
    csv << n << ',' << setup.t1 << ',' << format_double(setup.window.low) << ','
        << format_double(setup.window.high) << ',' << format_double(est.mean) << ','
        << format_double(est.second_moment) << ',' << format_double(est.ratio) << ','
        << (est.degenerate ? 1 : 0) << '\n';
  }
  return Json::object();
}

Json run_slopes(const Context& ctx, const Json& plan, std::ostringstream& csv) {
  const VarianceProfile profile = plan_profile(plan);
  const double tol = value_or(plan, "tol", kDefaultTolerance);
  const auto n = value_or<std::int64_t>(plan, "n", 1000);
  const SlopeRatios eta = slope_ratios(profile, tol);
  log_stage(ctx, "experiment", "slopes at n=" + std::to_string(n));
  csv << "r,head,tail\n";
  double grid_min = std::numeric_limits<double>::infinity();
  for (const auto& row : slope_table(profile, n, tol)) {
    csv << row.r << ',' << format_double(row.head) << ',' << format_double(row.tail) << '\n';
    grid_min = std::min(grid_min, row.tail);
  }
  Json meta;
  meta["eta1"] = eta.eta1;
  meta["eta2"] = eta.eta2;
  meta["tail_grid_min"] = grid_min;
  return meta;
}

void run_experiment(const Context& ctx, const Json& config) {
  const std::string which = config.at("case").get<std::string>();
  const Json& plan = config.at("plan");
  if (!plan.is_object()) throw InputError("plan must be a JSON object");
  std::ostringstream csv;
  Json meta;
  if (which == "tightness")
    meta = run_tightness(ctx, plan, csv);
  else if (which == "lower-bound")
    meta = run_lower_bound(ctx, plan, csv);
  else if (which == "slopes")
    meta = run_slopes(ctx, plan, csv);
  else
    throw InputError("unknown experiment '" + which + "'");
  write_text(ctx.common.out, csv.str());
  meta["manifest"] = make_manifest("experiment", config);
  write_text(ctx.common.out + ".meta.json", dump(meta));
}

void add_common(CLI::App* cmd, Common& common, bool out_required) {
  auto* out = cmd->add_option("--out", common.out, "Output file");
  if (out_required) out->required();
  cmd->add_option("--manifest", common.manifest,
                  "Rerun from a manifest (other config flags are ignored)");
  cmd->add_option("--threads", common.threads, "Worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);
}

Json profile_flag(const std::string& path) {
  if (path.empty()) throw InputError("--profile is required");
  return to_json(read_profile(path));
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return kExitInput;
  if (dynamic_cast<const CapacityExceeded*>(&e)) return kExitCapacity;
  if (dynamic_cast<const Error*>(&e)) return kExitValidation;
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kExitInput;
  return kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and prediction tools for branching random walks with "
               "time-inhomogeneous variance"};
  app.name("ibrw");
  app.set_version_flag("--version", IBRW_VERSION);
  app.require_subcommand(1);

  Common common;
  std::string profile_path;
  double tol = kDefaultTolerance;
  std::int64_t n = 0;
  int branching = 2;
  std::string mode = "auto";
  std::string time_mode = "strict";
  std::string table;
  std::uint64_t seed = 0;
  std::int64_t trials = 1;
  std::optional<std::uint64_t> cap;
  std::string summary;
  double sigma = 1.0;
  std::optional<double> coefficient;
  double z = 1.0;
  std::vector<std::int64_t> lengths;
  std::string kind = "barrier";
  std::string which;
  std::string plan_path;

  auto* hull = app.add_subcommand("hull", "Concave hull of the cumulative variance");
  hull->add_option("--profile", profile_path, "Profile JSON {sigmas, lambdas}");
  hull->add_option("--tol", tol, "Coincidence tolerance relative to J(1)");
  add_common(hull, common, false);

  auto* predict = app.add_subcommand("predict", "Second-order prediction of the maximum");
  predict->add_option("--profile", profile_path, "Profile JSON {sigmas, lambdas}");
  predict->add_option("--n", n, "Horizon");
  predict->add_option("--branching", branching, "Branching factor b");
  predict->add_option("--mode", mode, "restricted, unrestricted or auto")
      ->check(CLI::IsMember({"auto", "restricted", "unrestricted"}));
  predict->add_option("--time-mode", time_mode, "strict or rounding")
      ->check(CLI::IsMember({"strict", "rounding"}));
  predict->add_option("--table", table, "Also write k,path,barrier CSV here");
  add_common(predict, common, false);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo maximum of the walk");
  simulate->add_option("--profile", profile_path, "Profile JSON {sigmas, lambdas}");
  simulate->add_option("--n", n, "Horizon");
  simulate->add_option("--branching", branching, "Branching factor b");
  simulate->add_option("--seed", seed, "Generator seed");
  simulate->add_option("--trials", trials, "Independent replicas");
  simulate->add_option("--cap", cap, "Particle cap per generation (overrides IBRW_CAP)");
  simulate->add_option("--time-mode", time_mode, "strict or rounding")
      ->check(CLI::IsMember({"strict", "rounding"}));
  simulate->add_option("--summary", summary, "Summary JSON path (default <out>.summary.json)");
  add_common(simulate, common, true);

  auto* vbridge = app.add_subcommand("verify-bridge", "Bridge below a logarithmic barrier");
  vbridge->add_option("--sigma", sigma, "Step standard deviation");
  vbridge->add_option("--D", coefficient, "Barrier coefficient (default 2.5/g)");
  vbridge->add_option("--z", z, "Barrier offset");
  vbridge->add_option("--lengths", lengths, "Bridge lengths")->delimiter(',');
  vbridge->add_option("--trials", trials, "Trials per length");
  vbridge->add_option("--seed", seed, "Generator seed");
  add_common(vbridge, common, false);

  auto* vwalk = app.add_subcommand("verify-walk", "Random walk barrier and first-passage estimates");
  vwalk->add_option("--kind", kind, "barrier, ruin or passage")
      ->check(CLI::IsMember({"barrier", "ruin", "passage"}));
  vwalk->add_option("--sigma", sigma, "Step standard deviation");
  vwalk->add_option("--D", coefficient, "Barrier coefficient (default 2.5/g)");
  vwalk->add_option("--z", z, "Barrier offset, or passage level x");
  vwalk->add_option("--lengths", lengths, "Walk lengths t, or passage steps j")->delimiter(',');
  vwalk->add_option("--trials", trials, "Trials per length");
  vwalk->add_option("--seed", seed, "Generator seed");
  add_common(vwalk, common, false);

  auto* experiment = app.add_subcommand("experiment", "Lower-bound, tightness and slope studies");
  experiment->add_option("case", which, "lower-bound, tightness or slopes")
      ->check(CLI::IsMember({"lower-bound", "tightness", "slopes"}));
  experiment->add_option("--plan", plan_path, "Plan JSON");
  add_common(experiment, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const Context ctx{out, err, common};
  try {
    const auto config_for = [&](const std::string& command, const std::function<Json()>& build) {
      return common.manifest.empty() ? build() : load_manifest_config(common.manifest, command);
    };
    const double default_d = 2.5 / speed_constant(2);

    if (*hull) {
      run_hull(ctx, config_for("hull", [&] {
                 return Json{{"profile", profile_flag(profile_path)}, {"tol", tol}};
               }));
    } else if (*predict) {
      run_predict(ctx,
                  config_for("predict",
                             [&] {
                               return Json{{"profile", profile_flag(profile_path)},
                                           {"n", n},
                                           {"branching", branching},
                                           {"mode", mode},
                                           {"time_mode", time_mode}};
                             }),
                  table);
    } else if (*simulate) {
      run_simulate(ctx,
                   config_for("simulate",
                              [&] {
                                return Json{{"profile", profile_flag(profile_path)},
                                            {"n", n},
                                            {"branching", branching},
                                            {"seed", seed},
                                            {"trials", trials},
                                            {"cap", resolve_cap(cap)},
                                            {"time_mode", time_mode}};
                              }),
                   summary);
    } else if (*vbridge) {
      run_verify_bridge(ctx, config_for("verify-bridge", [&] {
                          return Json{{"sigma", sigma},   {"D", coefficient.value_or(default_d)},
                                      {"z", z},           {"lengths", lengths},
                                      {"trials", trials}, {"seed", seed}};
                        }));
    } else if (*vwalk) {
      run_verify_walk(ctx, config_for("verify-walk", [&] {
                        return Json{{"kind", kind},
                                    {"sigma", sigma},
                                    {"D", coefficient.value_or(default_d)},
                                    {"z", z},
                                    {"lengths", lengths},
                                    {"trials", trials},
                                    {"seed", seed}};
                      }));
    } else if (*experiment) {
      run_experiment(ctx, config_for("experiment", [&] {
                       if (which.empty()) throw InputError("experiment case is required");
                       if (plan_path.empty()) throw InputError("--plan is required");
                       Json plan = read_json(plan_path);
                       if (plan.is_object() && !plan.contains("cap"))
                         plan["cap"] = resolve_cap(std::nullopt);
                       return Json{{"case", which}, {"plan", plan}};
                     }));
    }
  } catch (const std::exception& e) {
    err << "ibrw: error: " << e.what() << '\n';
    return exit_code(e);
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ibrw"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ibrw
