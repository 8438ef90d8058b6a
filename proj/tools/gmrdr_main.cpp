// gmrdr: sum-rate-distortion analytics and DPCM simulation for Gauss-Markov
// GOP sources. Subcommands: rates, kstep, simulate, erasure, allocate.
//
// Exit codes: 0 success (and statistical gates passed), 1 statistical gate
// failure, 2 usage or validation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmrdr/allocation.hpp"
#include "gmrdr/experiments.hpp"
#include "gmrdr/pattern_spec.hpp"
#include "gmrdr/rd_analytics.hpp"
#include "gmrdr/report_format.hpp"
#include "gmrdr/source_model.hpp"

namespace {

using gmrdr::format_number;
using gmrdr::round_sig;
using json = nlohmann::ordered_json;

struct RawOptions {
  int num_frames = 0;
  int num_pixels = 4096;
  double rho = 0.0;
  std::vector<double> variance;
  std::vector<double> distortion;
  double budget_bits = 0.0;
  std::vector<double> weights;
  std::string pattern;
  int trials = 64;
  std::uint64_t seed = 0;
  double z_gate = 4.0;
  std::string config_path;
  std::string output_path;
  std::string format;
};

void add_common_options(CLI::App* cmd, RawOptions* raw) {
  cmd->add_option("--M", raw->num_frames, "frames per GOP");
  cmd->add_option("--n", raw->num_pixels, "pixels per frame (default 4096)");
  cmd->add_option("--rho", raw->rho, "temporal correlation coefficient");
  cmd->add_option("--variance", raw->variance,
                  "per-frame variance(s); one value applies to all frames");
  cmd->add_option("--distortion", raw->distortion,
                  "per-frame distortion target(s); one value is common");
  cmd->add_option("--budget-bits", raw->budget_bits,
                  "total sum-rate budget in bits");
  cmd->add_option("--weights", raw->weights,
                  "per-frame objective weights (allocate)");
  cmd->add_option("--pattern", raw->pattern,
                  "erasure pattern: mask like 11100, tail:k, or iid:p");
  cmd->add_option("--trials", raw->trials, "Monte Carlo trials (default 64)");
  cmd->add_option("--seed", raw->seed, "RNG seed (default 0 or GMRDR_SEED)");
  cmd->add_option("--z-gate", raw->z_gate, "z-score gate (default 4)");
  cmd->add_option("--config", raw->config_path, "JSON config file");
  cmd->add_option("--output", raw->output_path, "output path (default stdout)");
  cmd->add_option("--format", raw->format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

// Flags override config-file values; config values override defaults. The
// GMRDR_SEED environment variable replaces the default seed only.
struct Resolved {
  gmrdr::SourceParams params;
  std::optional<gmrdr::DistortionTuple> distortions;
  std::optional<double> budget_bits;
  std::vector<double> weights;
  std::string pattern;
  int trials = 64;
  std::uint64_t seed = 0;
  double z_gate = 4.0;
  std::string output_path;
  std::string format;
};

json load_config(const std::string& path) {
  if (path.empty()) {
    return json::object();
  }
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file: " + path);
  }
  json cfg = json::parse(in);
  if (!cfg.is_object()) {
    throw std::invalid_argument("config file must hold a JSON object");
  }
  return cfg;
}

std::vector<double> as_double_list(const json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) {
        throw std::invalid_argument("config key '" + key +
                                    "' must be numeric");
      }
      out.push_back(e.get<double>());
    }
  } else {
    throw std::invalid_argument("config key '" + key +
                                "' must be a number or array");
  }
  return out;
}

std::vector<double> broadcast(std::vector<double> values, int num_frames,
                              const std::string& what) {
  if (values.size() == 1) {
    return std::vector<double>(static_cast<std::size_t>(num_frames),
                               values[0]);
  }
  if (values.size() != static_cast<std::size_t>(num_frames)) {
    throw std::invalid_argument(what +
                                " needs one value or one value per frame");
  }
  return values;
}

Resolved resolve(const CLI::App* cmd, const RawOptions& raw,
                 bool needs_distortions, bool needs_budget,
                 bool needs_pattern) {
  const json cfg = load_config(raw.config_path);
  const auto given = [&](const std::string& flag) {
    return cmd->count(flag) > 0;
  };

  Resolved r;
  r.params.num_frames =
      given("--M") ? raw.num_frames
                   : cfg.value("M", raw.num_frames);
  r.params.num_pixels =
      given("--n") ? raw.num_pixels : cfg.value("n", raw.num_pixels);
  r.params.rho = given("--rho") ? raw.rho : cfg.value("rho", raw.rho);

  std::vector<double> variance = raw.variance;
  if (!given("--variance") && cfg.contains("variance")) {
    variance = as_double_list(cfg["variance"], "variance");
  }
  if (variance.empty()) {
    throw std::invalid_argument("--variance is required");
  }
  if (r.params.num_frames < 1) {
    throw std::invalid_argument("--M is required and must be >= 1");
  }
  r.params.variances = broadcast(variance, r.params.num_frames, "--variance");
  r.params.validate();

  std::vector<double> distortion = raw.distortion;
  if (!given("--distortion") && cfg.contains("distortion")) {
    distortion = as_double_list(cfg["distortion"], "distortion");
  }
  const bool have_distortion = !distortion.empty();
  const bool have_budget = given("--budget-bits") || cfg.contains("budget_bits");
  const double budget = given("--budget-bits")
                            ? raw.budget_bits
                            : cfg.value("budget_bits", raw.budget_bits);

  if (needs_budget) {
    if (!have_budget) {
      throw std::invalid_argument("--budget-bits is required");
    }
    if (have_distortion) {
      throw std::invalid_argument(
          "allocate takes --budget-bits, not --distortion");
    }
    r.budget_bits = budget;
  } else if (needs_distortions) {
    if (have_distortion == have_budget) {
      throw std::invalid_argument(
          "supply exactly one of --distortion or --budget-bits");
    }
    if (have_distortion) {
      gmrdr::DistortionTuple d;
      d.targets = broadcast(distortion, r.params.num_frames, "--distortion");
      r.distortions = d;
    } else {
      // Spend the budget with a common target.
      r.distortions =
          gmrdr::allocate_common_distortion(r.params, budget).distortions;
    }
  }

  r.weights = raw.weights;
  if (!given("--weights") && cfg.contains("weights")) {
    r.weights = as_double_list(cfg["weights"], "weights");
  }
  if (!r.weights.empty()) {
    r.weights = broadcast(r.weights, r.params.num_frames, "--weights");
  }

  r.pattern = given("--pattern") ? raw.pattern
                                 : cfg.value("pattern", raw.pattern);
  if (needs_pattern && r.pattern.empty()) {
    throw std::invalid_argument("--pattern is required");
  }

  r.trials = given("--trials") ? raw.trials : cfg.value("trials", raw.trials);
  r.z_gate = given("--z-gate") ? raw.z_gate : cfg.value("z_gate", raw.z_gate);

  if (given("--seed")) {
    r.seed = raw.seed;
  } else if (cfg.contains("seed")) {
    r.seed = cfg["seed"].get<std::uint64_t>();
  } else if (const char* env = std::getenv("GMRDR_SEED")) {
    r.seed = std::strtoull(env, nullptr, 10);
  } else {
    r.seed = raw.seed;
  }

  r.output_path = given("--output") ? raw.output_path
                                    : cfg.value("output", raw.output_path);
  r.format = given("--format") ? raw.format : cfg.value("format", raw.format);
  return r;
}

void write_output(const Resolved& r, const std::string& text) {
  if (r.output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(r.output_path);
  if (!out) {
    throw std::invalid_argument("cannot open output path: " + r.output_path);
  }
  out << text;
}

json model_header(const std::string& command, const Resolved& r) {
  json j;
  j["command"] = command;
  j["seed"] = r.seed;
  j["M"] = r.params.num_frames;
  j["n"] = r.params.num_pixels;
  j["rho"] = round_sig(r.params.rho);
  j["variances"] = round_sig(r.params.variances);
  return j;
}

json report_body(const gmrdr::DistortionTuple& d,
                 const gmrdr::RateReport& report) {
  json j;
  j["D_target"] = round_sig(d.targets);
  j["D_eff"] = round_sig(report.effective_distortions);
  j["sigma2_W"] = round_sig(report.innovation_variances);
  j["rate_bits"] = round_sig(report.rates_bits);
  j["sum_rate_bits"] = round_sig(report.sum_rate_bits);
  return j;
}

json stats_body(const gmrdr::TrialStats& stats) {
  json j;
  j["trials"] = stats.trials;
  j["z_gate"] = round_sig(stats.z_gate);
  j["per_frame_mse"] = round_sig(stats.per_frame_mse);
  j["per_frame_target"] = round_sig(stats.per_frame_target);
  j["standard_errors"] = round_sig(stats.standard_errors);
  j["z_scores"] = round_sig(stats.z_scores);
  j["passed"] = stats.passed;
  return j;
}

int cmd_rates(const Resolved& r) {
  const gmrdr::RateReport report = gmrdr::sum_rate(r.params, *r.distortions);
  if (r.format == "json") {
    json j = model_header("rates", r);
    j.update(report_body(*r.distortions, report));
    write_output(r, j.dump() + "\n");
    return 0;
  }
  std::ostringstream out;
  out << "frame,sigma2_W,D_target,D_eff,rate_bits\n";
  for (int t = 0; t < r.params.num_frames; ++t) {
    const std::size_t ft = static_cast<std::size_t>(t);
    out << (t + 1) << ',' << format_number(report.innovation_variances[ft])
        << ',' << format_number(r.distortions->targets[ft]) << ','
        << format_number(report.effective_distortions[ft]) << ','
        << format_number(report.rates_bits[ft]) << '\n';
  }
  out << "sum,,,," << format_number(report.sum_rate_bits) << '\n';
  write_output(r, out.str());
  return 0;
}

int cmd_kstep(const Resolved& r) {
  std::vector<int> ts;
  std::vector<int> ks;
  std::vector<double> values;
  for (int t = 0; t < r.params.num_frames; ++t) {
    for (int k = 0; k <= t + 1; ++k) {
      ts.push_back(t + 1);
      ks.push_back(k);
      values.push_back(gmrdr::kstep_variance(r.params, *r.distortions, t, k));
    }
  }
  if (r.format == "json") {
    json j = model_header("kstep", r);
    j["D_target"] = round_sig(r.distortions->targets);
    j["t"] = ts;
    j["k"] = ks;
    j["sigma2_Wtk"] = round_sig(values);
    write_output(r, j.dump() + "\n");
    return 0;
  }
  std::ostringstream out;
  out << "t,k,sigma2_Wtk\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << ts[i] << ',' << ks[i] << ',' << format_number(values[i]) << '\n';
  }
  write_output(r, out.str());
  return 0;
}

int cmd_simulate(const Resolved& r) {
  if (r.format == "csv") {
    throw std::invalid_argument("simulate emits JSON only");
  }
  const gmrdr::TrialStats stats = gmrdr::run_distortion_experiment(
      r.params, *r.distortions, r.trials, r.seed, r.z_gate);
  json j = model_header("simulate", r);
  j["D_target"] = round_sig(r.distortions->targets);
  j.update(stats_body(stats));
  write_output(r, j.dump() + "\n");
  return stats.passed ? 0 : 1;
}

int cmd_erasure(const Resolved& r) {
  if (r.format == "csv") {
    throw std::invalid_argument("erasure emits JSON only");
  }
  const gmrdr::PatternSpec spec = gmrdr::PatternSpec::parse(r.pattern);
  gmrdr::ErasureTrialStats result;
  if (spec.per_trial()) {
    result = gmrdr::run_erasure_experiment(
        r.params, *r.distortions,
        [&](int trial) {
          return spec.expand(r.params.num_frames, r.seed, trial);
        },
        r.trials, r.seed, r.z_gate);
  } else {
    result = gmrdr::run_erasure_experiment(
        r.params, *r.distortions, spec.expand(r.params.num_frames, r.seed, 0),
        r.trials, r.seed, r.z_gate);
  }
  json j = model_header("erasure", r);
  j["D_target"] = round_sig(r.distortions->targets);
  j["pattern"] = r.pattern;
  j["k_per_frame"] = round_sig(result.mean_k_per_frame);
  j.update(stats_body(result.stats));
  write_output(r, j.dump() + "\n");
  return result.stats.passed ? 0 : 1;
}

int cmd_allocate(const Resolved& r) {
  if (r.format == "csv") {
    throw std::invalid_argument("allocate emits JSON only");
  }
  const bool weighted = !r.weights.empty();
  const gmrdr::AllocationResult result =
      weighted ? gmrdr::allocate_min_weighted_distortion(r.params,
                                                         *r.budget_bits,
                                                         r.weights)
               : gmrdr::allocate_common_distortion(r.params, *r.budget_bits);
  json j = model_header("allocate", r);
  j["budget_bits"] = round_sig(*r.budget_bits);
  j["policy"] = weighted ? "weighted" : "common";
  j["weights"] = round_sig(r.weights);
  j.update(report_body(result.distortions, result.report));
  j["objective_value"] = round_sig(result.objective_value);
  j["iterations"] = result.iterations;
  write_output(r, j.dump() + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-rate-distortion analytics for Gauss-Markov GOP sources"};
  app.require_subcommand(1);

  RawOptions raw;
  CLI::App* rates = app.add_subcommand("rates", "per-frame rates and sum-rate");
  CLI::App* kstep =
      app.add_subcommand("kstep", "k-step prediction distortion table");
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo distortion experiment");
  CLI::App* erasure =
      app.add_subcommand("erasure", "Monte Carlo erasure experiment");
  CLI::App* allocate =
      app.add_subcommand("allocate", "rate-budget allocation");
  for (CLI::App* cmd : {rates, kstep, simulate, erasure, allocate}) {
    add_common_options(cmd, &raw);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (rates->parsed()) {
      return cmd_rates(resolve(rates, raw, true, false, false));
    }
    if (kstep->parsed()) {
      return cmd_kstep(resolve(kstep, raw, true, false, false));
    }
    if (simulate->parsed()) {
      return cmd_simulate(resolve(simulate, raw, true, false, false));
    }
    if (erasure->parsed()) {
      return cmd_erasure(resolve(erasure, raw, true, false, true));
    }
    if (allocate->parsed()) {
      return cmd_allocate(resolve(allocate, raw, false, true, false));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
