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

#include "swfair/sfm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/QR>

namespace swfair {

std::string to_string(SfmSolver solver) {
  switch (solver) {
    case SfmSolver::kExhaustive:
      return "exhaustive";
    case SfmSolver::kMinNormPoint:
      return "min_norm_point";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(tie_epsilon > 0.0)) throw PreconditionError("tie_epsilon must be positive");
  if (!(tie_scale >= 0.0)) throw PreconditionError("tie_scale must be nonnegative");
  if (!(mnp_gap_tolerance > 0.0)) throw PreconditionError("mnp_gap_tolerance must be positive");
  if (exhaustive_threshold > kDefaultExhaustiveLimit) {
    throw PreconditionError("exhaustive_threshold must not exceed " +
                            std::to_string(kDefaultExhaustiveLimit));
  }
  if (max_iterations == 0) throw PreconditionError("max_iterations must be positive");
}

SfmResult solve_sfm(const SetFunction& f, const Subset& domain, const SolverConfig& config) {
  config.validate();
  if (domain.size() <= config.exhaustive_threshold) return solve_sfm_exhaustive(f, domain, config);
  return solve_sfm_min_norm(f, domain, config);
}

// ---------------------------------------------------------------------------
// Exhaustive

SfmResult solve_sfm_exhaustive(const SetFunction& f, const Subset& domain,
                               const SolverConfig& config) {
  require_exhaustive_size(domain, std::min(config.exhaustive_threshold, kDefaultExhaustiveLimit),
                          "exhaustive SFM");
  SubsetEnumerator en(domain);
  const std::uint64_t count = en.count();

  std::vector<double> values(count, 0.0);
  double scale = 0.0;
  double best = 0.0;
  for (std::uint64_t m = 1; m < count; ++m) {
    values[m] = f(en.at(m));
    scale = std::max(scale, std::abs(values[m]));
    best = std::min(best, values[m]);
  }
  const double tol = config.tie_epsilon * std::max(scale, config.tie_scale);

  // Running union and intersection of minimizers. Each merge is checked
  // against the table, which is the lattice property on every pair
  // (accumulated set, new minimizer).
  const std::uint64_t full = count - 1;
  std::uint64_t upper = 0;
  std::uint64_t lower = full;
  bool any = false;
  for (std::uint64_t m = 0; m < count; ++m) {
    if (values[m] > best + tol) continue;
    if (any) {
      if (values[upper | m] > best + tol || values[lower & m] > best + tol) {
        throw ConsistencyError("minimizers of the SFM instance do not form a lattice at " +
                               en.at(m).to_string() + "; is the function submodular?");
      }
    }
    upper |= m;
    lower &= m;
    any = true;
  }

  SfmResult out;
  out.min_value = best;
  out.minimal_minimizer = en.at(lower);
  out.maximal_minimizer = en.at(upper);
  out.solver_used = SfmSolver::kExhaustive;
  out.oracle_evals = count - 1;
  out.ground_size = en.domain_size();
  return out;
}

// ---------------------------------------------------------------------------
// Minimum-norm point

namespace {

// Greedy vertex in local coordinates: the k-th entry belongs to members[k].
class LocalGreedy {
 public:
  LocalGreedy(const SetFunction& f, const Subset& domain)
      : f_(f), universe_(domain.universe()), members_(domain.members()) {}

  std::size_t dim() const { return members_.size(); }

  Eigen::VectorXd vertex(const Eigen::VectorXd& cost) {
    const std::size_t m = members_.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cost[static_cast<Eigen::Index>(a)] < cost[static_cast<Eigen::Index>(b)];
    });
    Eigen::VectorXd q(static_cast<Eigen::Index>(m));
    Subset prefix(universe_);
    double previous = 0.0;
    for (std::size_t k : order) {
      prefix.insert(members_[k]);
      const double value = f_(prefix);
      ++evals_;
      scale_ = std::max(scale_, std::abs(value));
      q[static_cast<Eigen::Index>(k)] = value - previous;
      previous = value;
    }
    return q;
  }

  Eigen::VectorXd to_universe(const Eigen::VectorXd& local) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(universe_));
    for (std::size_t k = 0; k < members_.size(); ++k) {
      x[static_cast<Eigen::Index>(members_[k])] = local[static_cast<Eigen::Index>(k)];
    }
    return x;
  }

  std::uint64_t evals() const { return evals_; }
  double scale() const { return scale_; }

 private:
  const SetFunction& f_;
  std::size_t universe_;
  std::vector<std::size_t> members_;
  std::uint64_t evals_ = 0;
  double scale_ = 0.0;
};

// Coefficients (summing to one) of the minimum-norm point in the affine hull
// of the columns of `points`.
Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& points) {
  const Eigen::Index k = points.cols();
  Eigen::VectorXd alpha(k);
  if (k == 1) {
    alpha[0] = 1.0;
    return alpha;
  }
  const Eigen::MatrixXd d = points.rightCols(k - 1).colwise() - points.col(0);
  const Eigen::VectorXd beta = d.colPivHouseholderQr().solve(-points.col(0));
  alpha[0] = 1.0 - beta.sum();
  alpha.tail(k - 1) = beta;
  return alpha;
}

void drop_column(Eigen::MatrixXd& m, Eigen::VectorXd& v, Eigen::Index j) {
  const Eigen::Index k = m.cols();
  if (j < k - 1) {
    m.block(0, j, m.rows(), k - 1 - j) = m.rightCols(k - 1 - j).eval();
    v.segment(j, k - 1 - j) = v.tail(k - 1 - j).eval();
  }
  m.conservativeResize(Eigen::NoChange, k - 1);
  v.conservativeResize(k - 1);
}

}  // namespace

MinNormPoint min_norm_point(const SetFunction& f, const Subset& domain,
                            const SolverConfig& config) {
  MinNormPoint out;
  LocalGreedy greedy(f, domain);
  const Eigen::Index m = static_cast<Eigen::Index>(greedy.dim());
  if (m == 0) {
    out.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain.universe()));
    return out;
  }

  constexpr double kPositive = 1e-12;
  Eigen::VectorXd x = greedy.vertex(Eigen::VectorXd::Zero(m));
  Eigen::MatrixXd corral = x;
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
  double max_norm2 = x.squaredNorm();

  bool converged = false;
  double gap = 0.0;
  std::size_t it = 0;
  for (; it < config.max_iterations; ++it) {
    const Eigen::VectorXd q = greedy.vertex(x);
    max_norm2 = std::max(max_norm2, q.squaredNorm());
    gap = x.squaredNorm() - x.dot(q);
    const double tol = config.mnp_gap_tolerance * std::max(max_norm2, 1e-300);
    if (gap <= tol) {
      converged = true;
      break;
    }
    bool duplicate = false;
    for (Eigen::Index j = 0; j < corral.cols() && !duplicate; ++j) {
      duplicate = (corral.col(j) - q).squaredNorm() <= 1e-28 * std::max(max_norm2, 1e-300);
    }
    if (duplicate) {
      // The linear oracle returned a vertex already in the corral, so x is
      // optimal up to rounding.
      converged = true;
      break;
    }

    corral.conservativeResize(Eigen::NoChange, corral.cols() + 1);
    corral.col(corral.cols() - 1) = q;
    lambda.conservativeResize(lambda.size() + 1);
    lambda[lambda.size() - 1] = 0.0;

    for (;;) {
      const Eigen::VectorXd alpha = affine_minimizer(corral);
      if (alpha.minCoeff() > kPositive) {
        lambda = alpha;
        x = corral * lambda;
        break;
      }
      // Step from lambda toward alpha until a coefficient hits zero.
      double theta = 1.0;
      Eigen::Index leaving = -1;
      for (Eigen::Index j = 0; j < alpha.size(); ++j) {
        if (alpha[j] <= kPositive) {
          const double denom = lambda[j] - alpha[j];
          const double t = denom > 0.0 ? lambda[j] / denom : 0.0;
          if (leaving < 0 || t < theta) {
            theta = t;
            leaving = j;
          }
        }
      }
      theta = std::clamp(theta, 0.0, 1.0);
      lambda = theta * alpha + (1.0 - theta) * lambda;
      lambda[leaving] = 0.0;
      for (Eigen::Index j = lambda.size() - 1; j >= 0; --j) {
        if (lambda[j] <= kPositive && corral.cols() > 1) drop_column(corral, lambda, j);
      }
      lambda /= lambda.sum();
      x = corral * lambda;
      if (corral.cols() == 1) break;
    }
  }

  out.x = greedy.to_universe(x);
  out.gap = gap;
  out.iterations = it;
  out.oracle_evals = greedy.evals();
  out.scale = greedy.scale();
  if (!converged) {
    SolverConfig relaxed = config;
    SfmResult best = minimizers_from_point(f, domain, out, relaxed);
    throw ConvergenceError("min-norm point did not reach gap tolerance in " +
                               std::to_string(config.max_iterations) + " iterations (gap " +
                               std::to_string(gap) + ")",
                           std::move(best), out);
  }
  return out;
}

SfmResult minimizers_from_point(const SetFunction& f, const Subset& domain, const MinNormPoint& p,
                                const SolverConfig& config) {
  std::vector<std::size_t> order = domain.members();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.x[static_cast<Eigen::Index>(a)] < p.x[static_cast<Eigen::Index>(b)];
  });

  // Both extreme minimizers are level sets of the exact minimum-norm base:
  // {x < 0} and {x <= 0}. Scanning every prefix of the sorted order recovers
  // them without a hard threshold on nearly-zero coordinates.
  std::vector<double> prefix_values(order.size() + 1, 0.0);
  Subset prefix(domain.universe());
  double scale = std::max(p.scale, config.tie_scale);
  for (std::size_t k = 0; k < order.size(); ++k) {
    prefix.insert(order[k]);
    prefix_values[k + 1] = f(prefix);
    scale = std::max(scale, std::abs(prefix_values[k + 1]));
  }
  const double best = *std::min_element(prefix_values.begin(), prefix_values.end());
  const double tol = config.tie_epsilon * scale;
  std::size_t first = order.size();
  std::size_t last = 0;
  for (std::size_t k = 0; k < prefix_values.size(); ++k) {
    if (prefix_values[k] <= best + tol) {
      first = std::min(first, k);
      last = std::max(last, k);
    }
  }

  SfmResult out;
  out.min_value = best;
  out.minimal_minimizer = Subset(domain.universe(), std::span(order.data(), first));
  out.maximal_minimizer = Subset(domain.universe(), std::span(order.data(), last));
  out.solver_used = SfmSolver::kMinNormPoint;
  out.oracle_evals = p.oracle_evals + order.size();
  out.ground_size = order.size();
  return out;
}

SfmResult solve_sfm_min_norm(const SetFunction& f, const Subset& domain,
                             const SolverConfig& config) {
  const MinNormPoint p = min_norm_point(f, domain, config);
  return minimizers_from_point(f, domain, p, config);
}

}  // namespace swfair
