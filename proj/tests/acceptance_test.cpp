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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "swfair/experiment.hpp"
#include "swfair/fairness.hpp"
#include "swfair/sfm.hpp"
#include "swfair/split.hpp"

namespace {

using swfair::BitPoolSource;
using swfair::SetFunction;
using swfair::Subset;
using swfair::WeightVector;
using Clock = std::chrono::steady_clock;

constexpr double kRateTol = 1e-9;          // criteria 1 and 3
constexpr double kShapleyTol = 1e-12;      // criterion 2
constexpr double kRegionTol = 1e-8;        // criterion 4 (a), (b)
constexpr double kOracleTol = 1e-4;        // criterion 4 (c)
constexpr double kSfmValueTol = 1e-7;      // criterion 5
constexpr double kSpearmanMin = 0.95;      // criterion 6
constexpr double kTieEpsilon = 1e-9;       // solver default, used by the brute-force checks

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  return (a - b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Brute-force references over all 2^n subsets of a small universe.

std::vector<double> table_of(const SetFunction& f) {
  const std::size_t n = f.universe();
  std::vector<double> t(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < t.size(); ++m) t[m] = f(Subset::from_mask(n, m));
  return t;
}

double sum_over(const Eigen::VectorXd& x, std::uint64_t mask) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (mask & (std::uint64_t{1} << i)) s += x[i];
  }
  return s;
}

// min over X of f(X) - x(X), including X = empty.
double polyhedron_slack(const std::vector<double>& t, const Eigen::VectorXd& x) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t m = 0; m < t.size(); ++m) worst = std::min(worst, t[m] - sum_over(x, m));
  return worst;
}

// min over nonempty X of r(X) - H(X | V \ X).
double region_slack(const std::vector<double>& t, const Eigen::VectorXd& r) {
  const std::uint64_t full = t.size() - 1;
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t m = 1; m < t.size(); ++m) {
    worst = std::min(worst, sum_over(r, m) - (t[full] - t[full & ~m]));
  }
  return worst;
}

// Union of all minimizers of t[m] - lambda w(m).
std::uint64_t maximal_minimizer(const std::vector<double>& t, const Eigen::VectorXd& w,
                                double lambda) {
  std::vector<double> h(t.size());
  double scale = std::abs(t.back());
  for (std::uint64_t m = 0; m < t.size(); ++m) {
    h[m] = t[m] - lambda * sum_over(w, m);
    scale = std::max(scale, std::abs(h[m]));
  }
  const double best = *std::min_element(h.begin(), h.end());
  std::uint64_t upper = 0;
  for (std::uint64_t m = 0; m < t.size(); ++m) {
    if (h[m] <= best + kTieEpsilon * scale) upper |= m;
  }
  return upper;
}

std::shared_ptr<const BitPoolSource> example_pool() {
  std::vector<BitPoolSource::Bit> bits = {{"a", 1.0}, {"b", 0.5}, {"c", 0.5}, {"d", 0.1}};
  std::vector<std::vector<std::size_t>> observes = {{0, 1, 2}, {2, 3}, {1, 3}};
  return std::make_shared<const BitPoolSource>(std::move(bits), std::move(observes));
}

// Seeded random bit-pool instance with weights in [0.5, 4]. The observation
// density varies per instance so that both split-free and deeply split
// instances occur.
struct Instance {
  std::shared_ptr<const BitPoolSource> f;
  WeightVector w;
  std::size_t n;
};

std::vector<Instance> suite_instances() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Instance> out;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 3 + static_cast<std::size_t>(k % 6);
    const std::size_t nbits = 3 * n;
    const double p = 0.15 + 0.45 * unit(rng);
    std::vector<BitPoolSource::Bit> bits;
    for (std::size_t j = 0; j < nbits; ++j) {
      bits.push_back({"b" + std::to_string(j), 1.0 - unit(rng)});
    }
    std::vector<std::vector<std::size_t>> observes(n);
    for (auto& o : observes) {
      while (o.empty()) {
        for (std::size_t j = 0; j < nbits; ++j) {
          if (unit(rng) < p) o.push_back(j);
        }
      }
    }
    Eigen::VectorXd w(static_cast<Eigen::Index>(n));
    for (auto& x : w) x = 0.5 + 3.5 * unit(rng);
    out.push_back({std::make_shared<const BitPoolSource>(std::move(bits), std::move(observes)),
                   WeightVector(w), n});
  }
  return out;
}

bool same_tree(const swfair::SplitNode& a, const swfair::SplitNode& b) {
  if (a.domain != b.domain || a.lambda != b.lambda || a.base_level != b.base_level) return false;
  if (a.sfm.maximal_minimizer != b.sfm.maximal_minimizer) return false;
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t k = 0; k < a.children.size(); ++k) {
    if (!same_tree(a.children[k], b.children[k])) return false;
  }
  return true;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(ry.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

// ---------------------------------------------------------------------------

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto f = example_pool();
  const Subset all = Subset::full(3);

  const WeightVector w313(vec({3, 1, 3}));
  const auto a = swfair::split(f, all, w313);
  const double da = max_abs_diff(a.rates, vec({1.125, 0.375, 0.6}));
  o.require(da <= kRateTol, "w=(3,1,3) off by " + fmt("%.3g", da));
  o.require(a.tree.root.sfm.maximal_minimizer == Subset(3, {2}),
            "w=(3,1,3) first split " + a.tree.root.sfm.maximal_minimizer.to_string());

  const auto b = swfair::split(f, all, WeightVector::ones(3));
  const double db = max_abs_diff(b.rates, vec({1.0, 0.55, 0.55}));
  o.require(db <= kRateTol, "w=1 off by " + fmt("%.3g", db));
  o.require(b.tree.root.sfm.maximal_minimizer == Subset(3, {1, 2}),
            "w=1 first split " + b.tree.root.sfm.maximal_minimizer.to_string());

  const double s = seconds_since(t0);
  o.require(s < 1.0, "runtime " + fmt("%.3f s", s));
  if (o.pass) {
    o.detail = "max error " + fmt("%.2g", std::max(da, db)) + ", splits {3} and {2,3}, " +
               fmt("%.4f s", s);
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto f = example_pool();
  const Subset all = Subset::full(3);
  const Eigen::VectorXd s = swfair::shapley_exact(*f, all);
  const double d = max_abs_diff(s, vec({1.5, 0.3, 0.3}));
  o.require(d <= kShapleyTol, "off by " + fmt("%.3g", d));

  std::vector<std::size_t> order = {0, 1, 2};
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(3);
  int count = 0;
  do {
    avg += swfair::greedy_vertex(*f, all, order);
    ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  avg /= count;
  const double dv = max_abs_diff(s, avg);
  o.require(count == 6 && dv <= kShapleyTol, "greedy-vertex average off by " + fmt("%.3g", dv));
  if (o.pass) o.detail = "error " + fmt("%.2g", d) + ", vertex-average error " + fmt("%.2g", dv);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto f = example_pool();
  const auto t = table_of(*f);
  const Subset all = Subset::full(3);
  struct Case {
    const char* name;
    WeightVector w;
    std::vector<Eigen::VectorXd> expected;
  };
  const std::vector<Case> cases = {
      {"w=1", WeightVector::ones(3), {vec({0, 0, 0}), vec({0.55, 0, 0}), vec({1, 0.55, 0.55})}},
      {"w=(3,1,3)", WeightVector(vec({3, 1, 3})),
       {vec({0, 0, 0}), vec({0.6, 0.2, 0}), vec({1.125, 0.375, 0.6})}},
  };
  double worst = 0.0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (const Case& c : cases) {
    const auto path = swfair::split(f, all, c.w).tree.path;
    o.require(path.size() == c.expected.size(),
              std::string(c.name) + " path has " + std::to_string(path.size()) + " entries");
    if (!o.pass) return o;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const double d = max_abs_diff(path[k], c.expected[k]);
      worst = std::max(worst, d);
      o.require(d <= kRateTol, std::string(c.name) + " step " + std::to_string(k) + " off by " +
                                   fmt("%.3g", d));
      const double slack = polyhedron_slack(t, path[k]);
      min_slack = std::min(min_slack, slack);
      o.require(slack >= -kRateTol, std::string(c.name) + " step " + std::to_string(k) +
                                        " violates a polyhedron constraint by " +
                                        fmt("%.3g", -slack));
    }
  }
  if (o.pass) {
    o.detail = "max error " + fmt("%.2g", worst) + ", min polyhedron slack " + fmt("%.2g", min_slack);
  }
  return o;
}

Outcome criterion4(const std::vector<Instance>& suite) {
  Outcome o;
  const auto t0 = Clock::now();
  double worst_region = std::numeric_limits<double>::infinity();
  double worst_sum = 0.0;
  double worst_fw = 0.0;
  std::size_t split_instances = 0;
  for (std::size_t k = 0; k < suite.size() && o.pass; ++k) {
    const Instance& inst = suite[k];
    const Subset all = Subset::full(inst.n);
    const std::string tag = "instance " + std::to_string(k) + ": ";
    const auto t = table_of(*inst.f);
    const auto r = swfair::split(inst.f, all, inst.w);

    const double slack = region_slack(t, r.rates);
    worst_region = std::min(worst_region, slack);
    o.require(slack >= -kRegionTol, tag + "(a) region slack " + fmt("%.3g", slack));

    const double dsum = std::abs(r.rates.sum() - t.back());
    worst_sum = std::max(worst_sum, dsum);
    o.require(dsum <= kRegionTol, tag + "(b) sum off by " + fmt("%.3g", dsum));

    const auto fw = swfair::egalitarian_oracle_fw(*inst.f, all, inst.w);
    const double dfw = max_abs_diff(fw.rates, r.rates);
    worst_fw = std::max(worst_fw, dfw);
    o.require(dfw <= kOracleTol, tag + "(c) Frank-Wolfe differs by " + fmt("%.3g", dfw));

    o.require(swfair::check_exchange_optimality(*inst.f, all, inst.w, r.rates).optimal,
              tag + "(d) positive exchange capacity");

    const auto m = swfair::recursion_metrics(r.tree);
    o.require(m.node_count <= 2 * inst.n - 1,
              tag + "(e) " + std::to_string(m.node_count) + " recursive calls");
    if (!r.tree.root.is_leaf()) ++split_instances;
  }
  const double s = seconds_since(t0);
  o.require(s < 120.0, "runtime " + fmt("%.1f s", s));
  if (o.pass) {
    o.detail = std::to_string(suite.size()) + " instances (" + std::to_string(split_instances) +
               " with splits), min region slack " + fmt("%.2g", worst_region) +
               ", max sum error " + fmt("%.2g", worst_sum) + ", max FW gap " +
               fmt("%.2g", worst_fw) + ", " + fmt("%.1f s", s);
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::size_t nontrivial = 0;
  for (int k = 0; k < 200 && o.pass; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k % 12);
    const std::size_t nbits = 3 * n;
    std::vector<BitPoolSource::Bit> bits;
    for (std::size_t j = 0; j < nbits; ++j) bits.push_back({"b" + std::to_string(j), 1.0 - unit(rng)});
    std::vector<std::vector<std::size_t>> observes(n);
    for (auto& o2 : observes) {
      while (o2.empty()) {
        for (std::size_t j = 0; j < nbits; ++j) {
          if (unit(rng) < 0.3) o2.push_back(j);
        }
      }
    }
    const BitPoolSource pool(std::move(bits), std::move(observes));
    const Subset all = Subset::full(n);

    // Even instances use the shift at the split ratio (ties at empty and V),
    // odd ones a random modular shift.
    Eigen::VectorXd shift(static_cast<Eigen::Index>(n));
    if (k % 2 == 0) {
      shift.setConstant(-pool(all) / static_cast<double>(n));
    } else {
      for (auto& x : shift) x = -pool(all) / static_cast<double>(n) * (0.3 + 1.4 * unit(rng));
    }
    const swfair::ModularShift f(pool, shift);

    const auto a = swfair::solve_sfm_exhaustive(f, all);
    const auto b = swfair::solve_sfm_min_norm(f, all);
    const std::string tag = "instance " + std::to_string(k) + ": ";
    const double d = std::abs(a.min_value - b.min_value);
    worst = std::max(worst, d);
    o.require(d <= kSfmValueTol, tag + "min values differ by " + fmt("%.3g", d));
    o.require(a.maximal_minimizer == b.maximal_minimizer,
              tag + "maximal minimizers " + a.maximal_minimizer.to_string() + " vs " +
                  b.maximal_minimizer.to_string());
    o.require(a.minimal_minimizer == b.minimal_minimizer,
              tag + "minimal minimizers " + a.minimal_minimizer.to_string() + " vs " +
                  b.minimal_minimizer.to_string());
    if (!a.maximal_minimizer.empty()) ++nontrivial;
  }
  if (o.pass) {
    o.detail = "200 instances (" + std::to_string(nontrivial) +
               " with nonempty minimizer), max value gap " + fmt("%.2g", worst);
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = Clock::now();
  swfair::ExperimentConfig config;
  config.n_min = 3;
  config.n_max = 40;
  config.repetitions = 30;
  config.seed = 1;
  config.timing = false;
  const auto rows = swfair::run_experiment(config);
  const std::string csv = swfair::experiment_csv(rows);
  const std::string again = swfair::experiment_csv(swfair::run_experiment(config));
  o.require(csv == again, "CSV differs between identical runs");

  std::vector<double> n, sum, max;
  double ratio_lo = std::numeric_limits<double>::infinity();
  double ratio_hi = -ratio_lo;
  std::size_t undefined_ratio = 0;
  for (const auto& r : rows) {
    n.push_back(static_cast<double>(r.n));
    sum.push_back(r.mean_sum_size);
    max.push_back(r.mean_max_size);
    if (r.n >= 4) {
      o.require(r.mean_max_size < r.mean_sum_size,
                "mean_max_size " + fmt("%.3f", r.mean_max_size) + " >= mean_sum_size " +
                    fmt("%.3f", r.mean_sum_size) + " at n=" + std::to_string(r.n));
    }
    if (r.mean_sum_size > 0) {
      const double ratio = r.mean_max_size / r.mean_sum_size;
      ratio_lo = std::min(ratio_lo, ratio);
      ratio_hi = std::max(ratio_hi, ratio);
    } else {
      ++undefined_ratio;
    }
  }
  const double rho_sum = spearman(n, sum);
  const double rho_max = spearman(n, max);
  o.require(rho_sum > kSpearmanMin, "Spearman(n, mean_sum_size) = " + fmt("%.3f", rho_sum));
  o.require(rho_max > kSpearmanMin, "Spearman(n, mean_max_size) = " + fmt("%.3f", rho_max));
  o.require(undefined_ratio == 0 && ratio_lo > 0.5 && ratio_hi < 1.0,
            "ratio range [" + fmt("%.3f", ratio_lo) + ", " + fmt("%.3f", ratio_hi) + "], " +
                std::to_string(undefined_ratio) + " rows without splits");
  const double s = seconds_since(t0);
  o.require(s < 600.0, "runtime " + fmt("%.1f s", s));

  const std::string summary = "Spearman sum " + fmt("%.3f", rho_sum) + ", max " +
                              fmt("%.3f", rho_max) + ", " + std::to_string(undefined_ratio) +
                              " of " + std::to_string(rows.size()) + " rows without splits";
  o.detail = o.pass ? summary + ", ratio in [" + fmt("%.3f", ratio_lo) + ", " +
                          fmt("%.3f", ratio_hi) + "], " + fmt("%.1f s", s)
                    : o.detail + " (" + summary + ")";
  return o;
}

Outcome criterion7(const std::vector<Instance>& suite) {
  Outcome o;
  swfair::SplitOptions par;
  par.mode = swfair::ExecutionMode::kParallel;
  par.max_fork_depth = 64;
  for (std::size_t k = 0; k < suite.size() && o.pass; ++k) {
    const Instance& inst = suite[k];
    const Subset all = Subset::full(inst.n);
    const auto a = swfair::split(inst.f, all, inst.w);
    const auto b = swfair::split(inst.f, all, inst.w, par);
    const std::string tag = "instance " + std::to_string(k) + ": ";
    o.require(a.rates == b.rates, tag + "rates differ");
    o.require(same_tree(a.tree.root, b.tree.root), tag + "trees differ");
  }
  if (o.pass) o.detail = std::to_string(suite.size()) + " instances, bitwise identical";
  return o;
}

Outcome criterion8(const std::vector<Instance>& suite) {
  Outcome o;
  std::size_t total_sets = 0;
  for (std::size_t k = 0; k < suite.size() && o.pass; ++k) {
    const Instance& inst = suite[k];
    if (inst.n > 8) continue;
    const Subset all = Subset::full(inst.n);
    const std::string tag = "instance " + std::to_string(k) + ": ";
    const auto r = swfair::split(inst.f, all, inst.w);
    swfair::Decomposition d;
    try {
      d = swfair::decompose(inst.f, all, inst.w);
    } catch (const std::exception& e) {
      o.require(false, tag + e.what());
      break;
    }
    const auto t = table_of(*inst.f);
    for (std::size_t j = 0; j < d.chain.size(); ++j) {
      const std::uint64_t expected = maximal_minimizer(t, inst.w.values(), d.critical_values[j]);
      o.require(d.chain[j].mask() == expected,
                tag + "S_" + std::to_string(j + 1) + " = " + d.chain[j].to_string() +
                    " is not the maximal minimizer " +
                    Subset::from_mask(inst.n, expected).to_string());
      if (j > 0) {
        o.require(d.critical_values[j - 1] < d.critical_values[j],
                  tag + "critical values not strictly increasing");
      }
    }
    o.require(!d.chain.empty() && d.chain.back() == all, tag + "chain does not end at V");
    o.require(swfair::reconstruct(d, inst.w) == r.rates, tag + "reconstruction differs");
    total_sets += d.chain.size();
  }
  if (o.pass) {
    o.detail = std::to_string(total_sets) + " chain sets verified, reconstruction bitwise exact";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<Instance> suite = suite_instances();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"example split rates", criterion1},
      {"shapley values", criterion2},
      {"adaptation paths", criterion3},
      {"optimality property suite", [&] { return criterion4(suite); }},
      {"SFM solver agreement", criterion5},
      {"experiment shape", criterion6},
      {"mode equivalence", [&] { return criterion7(suite); }},
      {"decomposition consistency", [&] { return criterion8(suite); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu: %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
