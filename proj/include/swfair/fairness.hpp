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

// Shapley value, rate-region membership, an independent conditional-gradient
// solver for the weighted egalitarian problem, and comparison metrics.

#ifndef SWFAIR_FAIRNESS_HPP_
#define SWFAIR_FAIRNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "swfair/errors.hpp"
#include "swfair/set_function.hpp"
#include "swfair/subset.hpp"

namespace swfair {

/// r_i = sum over C in domain \ {i} of |C|! (m-|C|-1)! / m! * (f(C+i) - f(C)),
/// computed in one sweep over the 2^m subsets.
Eigen::VectorXd shapley_exact(const SetFunction& f, const Subset& domain,
                              std::size_t size_limit = kDefaultExhaustiveLimit);

struct SampledShapley {
  Eigen::VectorXd rates;
  Eigen::VectorXd standard_error;  // per user; zero with fewer than two samples
  std::size_t samples = 0;
};

/// Average of greedy vertices over `samples` uniformly random orders.
SampledShapley shapley_sampled(const SetFunction& f, const Subset& domain, std::size_t samples,
                               std::uint64_t seed);

/// Average over every order of the domain (m! greedy vertices, m <= 10).
SampledShapley shapley_all_orders(const SetFunction& f, const Subset& domain);

struct MembershipReport {
  bool in_region = false;
  /// Subset with the smallest slack r(X) - f(X | domain \ X), X nonempty.
  Subset worst_constraint;
  double slack = 0.0;
  /// Same check in the form f(X) - r(X) >= 0.
  Subset worst_polyhedral;
  double polyhedral_slack = 0.0;
  double sum_deviation = 0.0;  // r(domain) - f(domain)
};

/// Checks r(X) >= f(domain) - f(domain \ X) for all X and r(domain) = f(domain).
MembershipReport verify_membership(const SetFunction& f, const Subset& domain,
                                   const Eigen::VectorXd& rates, double tolerance = 1e-8,
                                   std::size_t size_limit = kDefaultExhaustiveLimit);

struct FwResult {
  Eigen::VectorXd rates;
  double gap = 0.0;
  std::size_t iterations = 0;
};

class FwConvergenceError : public SolverError {
 public:
  FwConvergenceError(const std::string& what, FwResult best)
      : SolverError(what), best_(std::move(best)) {}
  const FwResult& best() const { return best_; }

 private:
  FwResult best_;
};

/// Minimizes sum r_i^2 / w_i over the base polyhedron with away-step
/// conditional gradient. The linear subproblem is a greedy vertex. Stops
/// when the duality gap is at most gap_tolerance * max(objective, 1).
FwResult egalitarian_oracle_fw(const SetFunction& f, const Subset& domain, const WeightVector& w,
                               double gap_tolerance = 1e-12, std::size_t max_iterations = 200000);

/// True when r has a max ratio r_i/w_i no larger and a min ratio no smaller
/// than each of `trials` random points of the base polyhedron.
bool minmax_check(const SetFunction& f, const Subset& domain, const WeightVector& w,
                  const Eigen::VectorXd& rates, std::size_t trials, std::uint64_t seed,
                  double tolerance = 1e-9);

/// Random base-polyhedron point: Dirichlet(1) mixture of greedy vertices at
/// random orders.
Eigen::VectorXd random_base_point(const SetFunction& f, const Subset& domain, std::size_t vertices,
                                  std::uint64_t seed);

struct ExchangeReport {
  bool optimal = true;
  /// First pair (from, to) whose exchange capacity is positive.
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  double capacity = 0.0;
};

/// For every pair with r_i/w_i > r_j/w_j + ratio_tolerance the exchange
/// capacity min { f(X) - r(X) : j in X, i not in X } must be within
/// slack_tolerance of zero.
ExchangeReport check_exchange_optimality(const SetFunction& f, const Subset& domain,
                                         const WeightVector& w, const Eigen::VectorXd& rates,
                                         double ratio_tolerance = 1e-6,
                                         double slack_tolerance = 1e-7,
                                         std::size_t size_limit = kDefaultExhaustiveLimit);

struct MethodSummary {
  std::string method;
  Eigen::VectorXd rates;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double max_rate = 0.0;
  double lifetime = 0.0;  // 1 / max rate
  double sum_rate = 0.0;
  bool in_region = false;
  double min_slack = 0.0;
};

struct FairnessReport {
  double total_entropy = 0.0;
  std::vector<MethodSummary> methods;
};

/// Summarizes each named allocation. Membership is checked exhaustively when
/// the domain fits the size limit; otherwise only the sum-rate is checked.
FairnessReport fairness_report(const SetFunction& f, const Subset& domain, const WeightVector& w,
                               const std::vector<std::pair<std::string, Eigen::VectorXd>>& rates,
                               double tolerance = 1e-8,
                               std::size_t size_limit = kDefaultExhaustiveLimit);

}  // namespace swfair

#endif  // SWFAIR_FAIRNESS_HPP_
