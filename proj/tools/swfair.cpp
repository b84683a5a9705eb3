// Copyright 2026 The swfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// swfair: fair rate allocation in the Slepian-Wolf region.
//
// Exit codes: 0 success (or member), 2 input error, 3 solver error,
// 4 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "swfair/errors.hpp"
#include "swfair/experiment.hpp"
#include "swfair/fairness.hpp"
#include "swfair/io.hpp"
#include "swfair/set_function.hpp"
#include "swfair/sfm.hpp"
#include "swfair/split.hpp"

namespace {

using swfair::Json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerify = 4;

struct CommonFlags {
  std::string source;
  std::string weights;
  std::string weights_file;
  bool json = false;
  std::string output;
  swfair::SolverConfig solver;
};

void add_solver_flags(CLI::App* cmd, swfair::SolverConfig& solver) {
  cmd->add_option("--tie-epsilon", solver.tie_epsilon, "Relative tie tolerance for SFM minimizers")
      ->capture_default_str();
  cmd->add_option("--gap-tolerance", solver.mnp_gap_tolerance, "Min-norm-point gap tolerance")
      ->capture_default_str();
  cmd->add_option("--exhaustive-threshold", solver.exhaustive_threshold,
                  "Largest ground set solved by enumeration")
      ->capture_default_str();
  cmd->add_option("--max-iterations", solver.max_iterations, "Min-norm-point iteration cap")
      ->capture_default_str();
}

void add_weight_flags(CLI::App* cmd, CommonFlags& flags) {
  auto* inline_w = cmd->add_option("--weights", flags.weights, "Comma-separated weights, one per user");
  cmd->add_option("--weights-file", flags.weights_file, "Weights as JSON array/map or CSV line")
      ->excludes(inline_w);
}

swfair::WeightVector weights_for(const CommonFlags& flags, const swfair::GroundSet& users) {
  if (!flags.weights.empty()) return swfair::parse_weights(flags.weights, users);
  if (!flags.weights_file.empty()) return swfair::load_weights(flags.weights_file, users);
  return swfair::WeightVector::ones(users.size());
}

std::string format_rate(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void print_rates_table(const swfair::GroundSet& users, const Eigen::VectorXd& rates) {
  std::size_t width = 4;
  for (const auto& u : users.users()) width = std::max(width, u.size());
  double total = 0.0;
  std::printf("%-*s  %s\n", static_cast<int>(width), "user", "rate");
  for (std::size_t i = 0; i < users.size(); ++i) {
    const double r = rates[static_cast<Eigen::Index>(i)];
    total += r;
    std::printf("%-*s  %s\n", static_cast<int>(width), users.user(i).c_str(), format_rate(r).c_str());
  }
  std::printf("sum_rate: %s\n", format_rate(total).c_str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw swfair::LoadError("cannot write '" + path + "'");
  out << text;
}

void write_rates(const std::string& path, const swfair::GroundSet& users, const Eigen::VectorXd& r) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    write_text(path, swfair::rates_to_csv(users, r));
  } else {
    write_text(path, swfair::rates_to_json(users, r).dump(2) + "\n");
  }
}

Json rates_document(const swfair::GroundSet& users, const Eigen::VectorXd& r) {
  Json j;
  j["rates"] = swfair::rates_to_json(users, r);
  j["sum_rate"] = r.sum();
  return j;
}

// ---------------------------------------------------------------------------

int cmd_egalitarian(const CommonFlags& flags, bool parallel, const std::string& trace) {
  const swfair::SourceModel source = swfair::load_source(flags.source);
  const swfair::WeightVector w = weights_for(flags, source.users);
  swfair::SplitOptions options;
  options.solver = flags.solver;
  options.mode = parallel ? swfair::ExecutionMode::kParallel : swfair::ExecutionMode::kSequential;
  options.record_path = !trace.empty();
  const swfair::SplitResult result = swfair::split(source.entropy, source.users.all(), w, options);

  if (!trace.empty()) {
    write_text(trace, swfair::split_tree_to_json(source.users, result.tree).dump(2) + "\n");
  }
  if (!flags.output.empty()) write_rates(flags.output, source.users, result.rates);
  if (flags.json) {
    std::cout << rates_document(source.users, result.rates).dump(2) << "\n";
  } else {
    print_rates_table(source.users, result.rates);
  }
  return kExitOk;
}

int cmd_shapley(const CommonFlags& flags, bool exact, std::size_t samples, std::uint64_t seed,
                bool all_orders) {
  const swfair::SourceModel source = swfair::load_source(flags.source);
  const swfair::Subset all = source.users.all();
  Json doc;
  Eigen::VectorXd rates;
  if (all_orders) {
    const auto s = swfair::shapley_all_orders(*source.entropy, all);
    rates = s.rates;
    doc["method"] = "all_orders";
    doc["samples"] = s.samples;
  } else if (exact || samples == 0) {
    rates = swfair::shapley_exact(*source.entropy, all);
    doc["method"] = "exact";
  } else {
    const auto s = swfair::shapley_sampled(*source.entropy, all, samples, seed);
    rates = s.rates;
    doc["method"] = "sampled";
    doc["samples"] = s.samples;
    doc["seed"] = seed;
    doc["standard_error"] = swfair::rates_to_json(source.users, s.standard_error);
  }
  if (!flags.output.empty()) write_rates(flags.output, source.users, rates);
  if (flags.json) {
    Json out = rates_document(source.users, rates);
    for (const auto& [k, v] : doc.items()) out[k] = v;
    std::cout << out.dump(2) << "\n";
  } else {
    print_rates_table(source.users, rates);
  }
  return kExitOk;
}

int cmd_verify(const CommonFlags& flags, const std::string& rates_path, double tolerance) {
  const swfair::SourceModel source = swfair::load_source(flags.source);
  const Eigen::VectorXd rates = swfair::load_rates(rates_path, source.users);
  const swfair::MembershipReport report =
      swfair::verify_membership(*source.entropy, source.users.all(), rates, tolerance);
  if (flags.json) {
    std::cout << swfair::membership_to_json(source.users, report).dump(2) << "\n";
  } else {
    std::printf("in_region: %s\n", report.in_region ? "true" : "false");
    std::printf("sum_deviation: %s\n", format_rate(report.sum_deviation).c_str());
    std::string members;
    for (const auto& name : source.users.names(report.worst_constraint)) {
      members += (members.empty() ? "" : ",") + name;
    }
    std::printf("tightest constraint: {%s} slack %s\n", members.c_str(),
                format_rate(report.slack).c_str());
  }
  return report.in_region ? kExitOk : kExitVerify;
}

int cmd_decompose(const CommonFlags& flags) {
  const swfair::SourceModel source = swfair::load_source(flags.source);
  const swfair::WeightVector w = weights_for(flags, source.users);
  swfair::SplitOptions options;
  options.solver = flags.solver;
  options.record_path = false;
  const swfair::Decomposition d = swfair::decompose(source.entropy, source.users.all(), w, options);
  Json j = swfair::decomposition_to_json(source.users, d);
  j["rates"] = swfair::rates_to_json(source.users, swfair::reconstruct(d, w));
  const std::string text = j.dump(2) + "\n";
  if (!flags.output.empty()) write_text(flags.output, text);
  std::cout << text;
  return kExitOk;
}

int cmd_experiment(swfair::ExperimentConfig config, const std::string& output) {
  const auto rows = swfair::run_experiment(
      config, [](std::size_t n, std::size_t rep, const std::string& msg) {
        std::cerr << "warning: excluded instance n=" << n << " rep=" << rep << ": " << msg << "\n";
      });
  const std::string csv = swfair::experiment_csv(rows);
  if (output.empty()) {
    std::cout << csv;
  } else {
    write_text(output, csv);
  }
  return kExitOk;
}

int cmd_check(const CommonFlags& flags) {
  const swfair::SourceModel source = swfair::load_source(flags.source);
  const swfair::Subset all = source.users.all();
  const auto sub = swfair::check_submodular(*source.entropy, all);
  const auto mono = swfair::check_monotone(*source.entropy, all);
  Json j;
  j["submodular"] = sub.submodular;
  if (sub.violation) {
    Json v;
    v["x"] = swfair::subset_to_json(source.users, sub.violation->x);
    v["y"] = swfair::subset_to_json(source.users, sub.violation->y);
    v["element"] = source.users.user(sub.violation->element);
    v["gain_at_x"] = sub.violation->gain_at_x;
    v["gain_at_y"] = sub.violation->gain_at_y;
    j["submodularity_violation"] = v;
  }
  j["monotone"] = mono.monotone;
  if (mono.violation) {
    Json v;
    v["x"] = swfair::subset_to_json(source.users, mono.violation->x);
    v["element"] = source.users.user(mono.violation->element);
    j["monotonicity_violation"] = v;
  }
  if (flags.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("submodular: %s\n", sub.submodular ? "true" : "false");
    if (sub.violation) {
      std::printf("  witness: X=%s Y=%s i=%s gains %s < %s\n", j["submodularity_violation"]["x"].dump().c_str(),
                  j["submodularity_violation"]["y"].dump().c_str(),
                  source.users.user(sub.violation->element).c_str(),
                  format_rate(sub.violation->gain_at_x).c_str(),
                  format_rate(sub.violation->gain_at_y).c_str());
    }
    std::printf("monotone: %s\n", mono.monotone ? "true" : "false");
  }
  return sub.submodular ? kExitOk : kExitVerify;
}

int cmd_compare(const CommonFlags& flags, std::size_t samples, std::uint64_t seed) {
  const swfair::SourceModel source = swfair::load_source(flags.source);
  const swfair::WeightVector w = weights_for(flags, source.users);
  const swfair::Subset all = source.users.all();
  swfair::SplitOptions options;
  options.solver = flags.solver;
  options.record_path = false;
  const auto egalitarian = swfair::split(source.entropy, all, w, options);
  Eigen::VectorXd shapley = all.size() <= swfair::kDefaultExhaustiveLimit
                                ? swfair::shapley_exact(*source.entropy, all)
                                : swfair::shapley_sampled(*source.entropy, all, samples, seed).rates;
  const auto report = swfair::fairness_report(*source.entropy, all, w,
                                              {{"egalitarian", egalitarian.rates}, {"shapley", shapley}});
  if (flags.json) {
    std::cout << swfair::fairness_report_to_json(source.users, report).dump(2) << "\n";
    return kExitOk;
  }
  std::printf("H(V) = %s\n", format_rate(report.total_entropy).c_str());
  std::printf("%-12s %-14s %-14s %-14s %-9s\n", "method", "max_rate", "max_ratio", "lifetime", "in_region");
  for (const auto& m : report.methods) {
    std::printf("%-12s %-14s %-14s %-14s %-9s\n", m.method.c_str(), format_rate(m.max_rate).c_str(),
                format_rate(m.max_ratio).c_str(), format_rate(m.lifetime).c_str(),
                m.in_region ? "true" : "false");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair source-coding rate allocation in the Slepian-Wolf region"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* egal = app.add_subcommand("egalitarian", "Weighted egalitarian rates by recursive splitting");
  bool parallel = false;
  std::string trace;
  egal->add_option("source", flags.source, "Source model JSON")->required();
  add_weight_flags(egal, flags);
  egal->add_flag("--parallel", parallel, "Solve independent branches concurrently");
  egal->add_option("--trace", trace, "Write the split tree and adaptation path as JSON");
  egal->add_option("-o,--output", flags.output, "Write rates (JSON, or CSV for *.csv)");
  egal->add_flag("--json", flags.json, "Machine-readable stdout");
  add_solver_flags(egal, flags.solver);

  auto* shap = app.add_subcommand("shapley", "Shapley value allocation");
  bool exact = false;
  bool all_orders = false;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  shap->add_option("source", flags.source, "Source model JSON")->required();
  auto* exact_flag = shap->add_flag("--exact", exact, "Exact value by a sweep over all subsets");
  shap->add_option("--samples", samples, "Number of random orders to average")->excludes(exact_flag);
  shap->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  shap->add_flag("--enumerate-all", all_orders, "Average over every order (up to 10 users)");
  shap->add_option("-o,--output", flags.output, "Write rates (JSON, or CSV for *.csv)");
  shap->add_flag("--json", flags.json, "Machine-readable stdout");

  auto* verify = app.add_subcommand("verify", "Check a rate vector against the rate region");
  std::string rates_path;
  double tolerance = 1e-8;
  verify->add_option("source", flags.source, "Source model JSON")->required();
  verify->add_option("rates", rates_path, "Rates as JSON map or CSV")->required();
  verify->add_option("--tolerance", tolerance, "Constraint tolerance")->capture_default_str();
  verify->add_flag("--json", flags.json, "Machine-readable stdout");

  auto* decomp = app.add_subcommand("decompose", "Critical values and set chain of the solution");
  decomp->add_option("source", flags.source, "Source model JSON")->required();
  add_weight_flags(decomp, flags);
  decomp->add_option("-o,--output", flags.output, "Also write the JSON to this file");
  add_solver_flags(decomp, flags.solver);

  auto* exp = app.add_subcommand("experiment", "Sequential vs parallel SFM size sweep (CSV)");
  swfair::ExperimentConfig config;
  bool no_parallel = false;
  bool no_timing = false;
  std::string exp_output;
  exp->add_option("--n-min", config.n_min)->capture_default_str();
  exp->add_option("--n-max", config.n_max)->capture_default_str();
  exp->add_option("--reps", config.repetitions, "Repetitions per n")->capture_default_str();
  exp->add_option("--seed", config.seed)->capture_default_str();
  exp->add_option("--pool-factor", config.pool_factor, "Bits per user")->capture_default_str();
  exp->add_option("--observe-prob", config.observe_prob)->capture_default_str();
  exp->add_flag("--no-parallel", no_parallel, "Skip timing the parallel mode");
  exp->add_flag("--no-timing", no_timing, "Write zero wall times (byte-reproducible output)");
  exp->add_option("-o,--output", exp_output, "CSV path (default stdout)");
  add_solver_flags(exp, config.solver);

  auto* check = app.add_subcommand("check", "Submodularity and monotonicity of a source model");
  check->add_option("source", flags.source, "Source model JSON")->required();
  check->add_flag("--json", flags.json, "Machine-readable stdout");

  auto* compare = app.add_subcommand("compare", "Egalitarian vs Shapley fairness report");
  std::size_t compare_samples = 10000;
  compare->add_option("source", flags.source, "Source model JSON")->required();
  add_weight_flags(compare, flags);
  compare->add_option("--samples", compare_samples, "Shapley samples for large user sets")
      ->capture_default_str();
  compare->add_option("--seed", seed)->capture_default_str();
  compare->add_flag("--json", flags.json, "Machine-readable stdout");
  add_solver_flags(compare, flags.solver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*egal) return cmd_egalitarian(flags, parallel, trace);
    if (*shap) return cmd_shapley(flags, exact, samples, seed, all_orders);
    if (*verify) return cmd_verify(flags, rates_path, tolerance);
    if (*decomp) return cmd_decompose(flags);
    if (*exp) {
      config.parallel = !no_parallel;
      config.timing = !no_timing;
      return cmd_experiment(config, exp_output);
    }
    if (*check) return cmd_check(flags);
    if (*compare) return cmd_compare(flags, compare_samples, seed);
  } catch (const swfair::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const swfair::SizeLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const swfair::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const swfair::ConsistencyError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitInput;
}
