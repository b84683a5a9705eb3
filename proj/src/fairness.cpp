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

#include "swfair/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace swfair {

namespace {

double ratio_at(const Eigen::VectorXd& r, const WeightVector& w, std::size_t i) {
  return r[static_cast<Eigen::Index>(i)] / w[i];
}

std::pair<double, double> ratio_range(const Eigen::VectorXd& r, const WeightVector& w,
                                      const Subset& domain) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  domain.for_each([&](std::size_t i) {
    lo = std::min(lo, ratio_at(r, w, i));
    hi = std::max(hi, ratio_at(r, w, i));
  });
  return {lo, hi};
}

}  // namespace

// ---------------------------------------------------------------------------
// Shapley

Eigen::VectorXd shapley_exact(const SetFunction& f, const Subset& domain, std::size_t size_limit) {
  require_exhaustive_size(domain, size_limit, "exact Shapley value (use sampling instead)");
  const std::vector<double> table = tabulate(f, domain, size_limit);
  SubsetEnumerator en(domain);
  const std::size_t m = en.domain_size();

  // coeff[k] = k! (m-k-1)! / m! = 1 / (m * binom(m-1, k)).
  std::vector<double> coeff(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double binom = 1.0;
    for (std::size_t t = 1; t <= k; ++t) {
      binom = binom * static_cast<double>(m - 1 - k + t) / static_cast<double>(t);
    }
    coeff[k] = 1.0 / (static_cast<double>(m) * binom);
  }

  Eigen::VectorXd local = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (std::uint64_t x = 0; x < en.count(); ++x) {
    const double c = coeff[static_cast<std::size_t>(std::popcount(x))];
    if (static_cast<std::size_t>(std::popcount(x)) == m) continue;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t bi = std::uint64_t{1} << i;
      if (x & bi) continue;
      local[static_cast<Eigen::Index>(i)] += c * (table[x | bi] - table[x]);
    }
  }

  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain.universe()));
  for (std::size_t i = 0; i < m; ++i) {
    r[static_cast<Eigen::Index>(en.members()[i])] = local[static_cast<Eigen::Index>(i)];
  }
  return r;
}

namespace {

class VertexAverager {
 public:
  explicit VertexAverager(std::size_t n)
      : sum_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))), sumsq_(sum_) {}

  void add(const Eigen::VectorXd& v) {
    sum_ += v;
    sumsq_ += v.cwiseAbs2();
    ++count_;
  }

  SampledShapley finish() const {
    SampledShapley out;
    out.samples = count_;
    const double s = static_cast<double>(count_);
    out.rates = sum_ / s;
    out.standard_error = Eigen::VectorXd::Zero(sum_.size());
    if (count_ >= 2) {
      const Eigen::VectorXd var =
          ((sumsq_ - sum_.cwiseAbs2() / s) / (s - 1.0)).cwiseMax(0.0);
      out.standard_error = (var / s).cwiseSqrt();
    }
    return out;
  }

 private:
  Eigen::VectorXd sum_;
  Eigen::VectorXd sumsq_;
  std::size_t count_ = 0;
};

}  // namespace

SampledShapley shapley_sampled(const SetFunction& f, const Subset& domain, std::size_t samples,
                               std::uint64_t seed) {
  if (samples == 0) throw PreconditionError("sampled Shapley needs at least one sample");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order = domain.members();
  VertexAverager avg(domain.universe());
  for (std::size_t s = 0; s < samples; ++s) {
    std::shuffle(order.begin(), order.end(), rng);
    avg.add(greedy_vertex(f, domain, order));
  }
  return avg.finish();
}

SampledShapley shapley_all_orders(const SetFunction& f, const Subset& domain) {
  require_exhaustive_size(domain, 10, "enumerating all orders");
  std::vector<std::size_t> order = domain.members();
  VertexAverager avg(domain.universe());
  do {
    avg.add(greedy_vertex(f, domain, order));
  } while (std::next_permutation(order.begin(), order.end()));
  return avg.finish();
}

// ---------------------------------------------------------------------------
// Membership

MembershipReport verify_membership(const SetFunction& f, const Subset& domain,
                                   const Eigen::VectorXd& rates, double tolerance,
                                   std::size_t size_limit) {
  require_exhaustive_size(domain, size_limit, "membership verification");
  if (static_cast<std::size_t>(rates.size()) != domain.universe()) {
    throw InputError("rate vector has " + std::to_string(rates.size()) + " entries for " +
                     std::to_string(domain.universe()) + " users");
  }
  const std::vector<double> table = tabulate(f, domain, size_limit);
  SubsetEnumerator en(domain);
  const std::size_t m = en.domain_size();
  const std::uint64_t full = en.count() - 1;

  std::vector<double> local(m);
  for (std::size_t i = 0; i < m; ++i) local[i] = rates[static_cast<Eigen::Index>(en.members()[i])];

  MembershipReport out;
  out.slack = std::numeric_limits<double>::infinity();
  out.polyhedral_slack = out.slack;
  std::uint64_t worst = 0;
  std::uint64_t worst_poly = 0;
  for (std::uint64_t x = 1; x < en.count(); ++x) {
    double rx = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (x & (std::uint64_t{1} << i)) rx += local[i];
    }
    const double sw = rx - (table[full] - table[full & ~x]);
    const double poly = table[x] - rx;
    if (sw < out.slack) {
      out.slack = sw;
      worst = x;
    }
    if (poly < out.polyhedral_slack) {
      out.polyhedral_slack = poly;
      worst_poly = x;
    }
  }
  double total = 0.0;
  for (double v : local) total += v;
  out.sum_deviation = total - table[full];
  out.worst_constraint = en.at(worst);
  out.worst_polyhedral = en.at(worst_poly);
  if (m == 0) {
    out.slack = 0.0;
    out.polyhedral_slack = 0.0;
  }
  out.in_region = out.slack >= -tolerance && out.polyhedral_slack >= -tolerance &&
                  std::abs(out.sum_deviation) <= tolerance;
  return out;
}

// ---------------------------------------------------------------------------
// Away-step conditional gradient for sum r_i^2 / w_i

FwResult egalitarian_oracle_fw(const SetFunction& f, const Subset& domain, const WeightVector& w,
                               double gap_tolerance, std::size_t max_iterations) {
  if (domain.empty()) throw PreconditionError("egalitarian oracle needs a nonempty user set");
  if (w.size() != domain.universe()) throw PreconditionError("weight vector size mismatch");

  const Eigen::VectorXd inv_w = w.values().cwiseInverse();
  auto objective = [&](const Eigen::VectorXd& r) { return r.cwiseAbs2().dot(inv_w); };

  struct Atom {
    Eigen::VectorXd vertex;
    double weight;
  };
  std::vector<Atom> active;
  std::vector<std::size_t> start = domain.members();
  Eigen::VectorXd x = greedy_vertex(f, domain, start);
  active.push_back({x, 1.0});
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());

  FwResult out;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd grad = 2.0 * x.cwiseProduct(inv_w);
    const Eigen::VectorXd s = greedy_vertex_by_cost(f, domain, grad);
    const double fw_gap = grad.dot(x - s);
    out.gap = fw_gap;
    out.iterations = it;
    if (fw_gap <= gap_tolerance * std::max(objective(x), 1.0)) {
      out.rates = x;
      return out;
    }

    std::size_t away = 0;
    double away_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < active.size(); ++k) {
      const double score = grad.dot(active[k].vertex);
      if (score > away_score) {
        away_score = score;
        away = k;
      }
    }
    const double away_gap = away_score - grad.dot(x);

    Eigen::VectorXd d;
    double gamma_max = 1.0;
    const bool fw_step = fw_gap >= away_gap;
    if (fw_step) {
      d = s - x;
    } else {
      d = x - active[away].vertex;
      const double a = active[away].weight;
      gamma_max = a / (1.0 - a);
    }
    const double curvature = 2.0 * d.cwiseAbs2().dot(inv_w);
    if (!(curvature > 0.0)) {
      out.rates = x;
      return out;
    }
    const double gamma = std::clamp(-grad.dot(d) / curvature, 0.0, gamma_max);
    x += gamma * d;

    if (fw_step) {
      for (auto& atom : active) atom.weight *= (1.0 - gamma);
      auto hit = std::find_if(active.begin(), active.end(), [&](const Atom& atom) {
        return (atom.vertex - s).cwiseAbs().maxCoeff() <= 1e-12 * scale;
      });
      if (hit != active.end()) {
        hit->weight += gamma;
      } else {
        active.push_back({s, gamma});
      }
      if (gamma >= 1.0) active = {Atom{s, 1.0}};
    } else {
      for (auto& atom : active) atom.weight *= (1.0 + gamma);
      active[away].weight -= gamma;
      if (gamma >= gamma_max) active.erase(active.begin() + static_cast<std::ptrdiff_t>(away));
    }
    std::erase_if(active, [](const Atom& atom) { return atom.weight <= 0.0; });
  }
  out.rates = x;
  throw FwConvergenceError("conditional gradient did not reach gap tolerance in " +
                               std::to_string(max_iterations) + " iterations",
                           out);
}

// ---------------------------------------------------------------------------
// Min-max / max-min and exchange optimality

Eigen::VectorXd random_base_point(const SetFunction& f, const Subset& domain, std::size_t vertices,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<std::size_t> order = domain.members();
  Eigen::VectorXd point = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain.universe()));
  double total = 0.0;
  for (std::size_t k = 0; k < std::max<std::size_t>(vertices, 1); ++k) {
    std::shuffle(order.begin(), order.end(), rng);
    const double a = expo(rng);
    point += a * greedy_vertex(f, domain, order);
    total += a;
  }
  return point / total;
}

bool minmax_check(const SetFunction& f, const Subset& domain, const WeightVector& w,
                  const Eigen::VectorXd& rates, std::size_t trials, std::uint64_t seed,
                  double tolerance) {
  const auto [lo, hi] = ratio_range(rates, w, domain);
  std::mt19937_64 seeds(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const Eigen::VectorXd q = random_base_point(f, domain, domain.size() + 1, seeds());
    const auto [qlo, qhi] = ratio_range(q, w, domain);
    if (hi > qhi + tolerance || lo < qlo - tolerance) return false;
  }
  return true;
}

ExchangeReport check_exchange_optimality(const SetFunction& f, const Subset& domain,
                                         const WeightVector& w, const Eigen::VectorXd& rates,
                                         double ratio_tolerance, double slack_tolerance,
                                         std::size_t size_limit) {
  require_exhaustive_size(domain, size_limit, "exchange-capacity check");
  const std::vector<double> table = tabulate(f, domain, size_limit);
  SubsetEnumerator en(domain);
  const std::size_t m = en.domain_size();

  std::vector<double> slack(en.count());
  for (std::uint64_t x = 0; x < en.count(); ++x) {
    double rx = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (x & (std::uint64_t{1} << k)) rx += rates[static_cast<Eigen::Index>(en.members()[k])];
    }
    slack[x] = table[x] - rx;
  }

  ExchangeReport out;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t i = en.members()[a];
      const std::size_t j = en.members()[b];
      if (a == b || ratio_at(rates, w, i) <= ratio_at(rates, w, j) + ratio_tolerance) continue;
      double capacity = std::numeric_limits<double>::infinity();
      const std::uint64_t bi = std::uint64_t{1} << a;
      const std::uint64_t bj = std::uint64_t{1} << b;
      for (std::uint64_t x = 0; x < en.count(); ++x) {
        if ((x & bj) && !(x & bi)) capacity = std::min(capacity, slack[x]);
      }
      if (std::abs(capacity) > slack_tolerance) {
        out.optimal = false;
        out.pair = {i, j};
        out.capacity = capacity;
        return out;
      }
    }
  }
  return out;
}

FairnessReport fairness_report(const SetFunction& f, const Subset& domain, const WeightVector& w,
                               const std::vector<std::pair<std::string, Eigen::VectorXd>>& rates,
                               double tolerance, std::size_t size_limit) {
  FairnessReport out;
  out.total_entropy = f(domain);
  for (const auto& [name, r] : rates) {
    MethodSummary s;
    s.method = name;
    s.rates = r;
    std::tie(s.min_ratio, s.max_ratio) = ratio_range(r, w, domain);
    s.max_rate = -std::numeric_limits<double>::infinity();
    s.sum_rate = 0.0;
    domain.for_each([&](std::size_t i) {
      s.max_rate = std::max(s.max_rate, r[static_cast<Eigen::Index>(i)]);
      s.sum_rate += r[static_cast<Eigen::Index>(i)];
    });
    s.lifetime = s.max_rate > 0.0 ? 1.0 / s.max_rate : std::numeric_limits<double>::infinity();
    if (domain.size() <= size_limit) {
      const MembershipReport m = verify_membership(f, domain, r, tolerance, size_limit);
      s.in_region = m.in_region;
      s.min_slack = std::min(m.slack, m.polyhedral_slack);
    } else {
      s.in_region = std::abs(s.sum_rate - out.total_entropy) <= tolerance;
      s.min_slack = std::numeric_limits<double>::quiet_NaN();
    }
    out.methods.push_back(std::move(s));
  }
  return out;
}

}  // namespace swfair
