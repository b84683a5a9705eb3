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

// Submodular function minimization: exhaustive sweep for small ground sets
// and the Fujishige-Wolfe minimum-norm-point method beyond.

#ifndef SWFAIR_SFM_HPP_
#define SWFAIR_SFM_HPP_

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "swfair/errors.hpp"
#include "swfair/set_function.hpp"
#include "swfair/subset.hpp"

namespace swfair {

enum class SfmSolver { kExhaustive, kMinNormPoint };

std::string to_string(SfmSolver solver);

struct SolverConfig {
  /// Ground sets up to this size are solved by enumeration (at most 20).
  std::size_t exhaustive_threshold = 16;
  /// Values within tie_epsilon * max|f| of the minimum count as minimizers.
  double tie_epsilon = 1e-9;
  /// Lower bound on the max|f| used for ties. Useful when f is a shifted
  /// function whose values all cancel to rounding noise.
  double tie_scale = 0.0;
  /// Wolfe gap ||x||^2 - <x, q> relative to the largest squared vertex norm.
  double mnp_gap_tolerance = 1e-10;
  std::size_t max_iterations = 10000;

  /// Throws PreconditionError on out-of-range fields.
  void validate() const;
};

struct SfmResult {
  double min_value = 0.0;
  Subset minimal_minimizer;
  Subset maximal_minimizer;
  SfmSolver solver_used = SfmSolver::kExhaustive;
  std::uint64_t oracle_evals = 0;
  std::size_t ground_size = 0;
};

/// Minimum-norm-point iterate on the base polyhedron of f over a domain.
struct MinNormPoint {
  Eigen::VectorXd x;  // universe-length; zero outside the domain
  double gap = 0.0;
  std::size_t iterations = 0;
  std::uint64_t oracle_evals = 0;
  double scale = 0.0;  // largest |f| seen, for relative tie tests
};

/// Thrown by the min-norm path when the iteration cap is reached. Carries
/// the minimizers extracted from the best iterate.
class ConvergenceError : public SolverError {
 public:
  ConvergenceError(const std::string& what, SfmResult best, MinNormPoint iterate)
      : SolverError(what), best_(std::move(best)), iterate_(std::move(iterate)) {}
  const SfmResult& best() const { return best_; }
  const MinNormPoint& iterate() const { return iterate_; }

 private:
  SfmResult best_;
  MinNormPoint iterate_;
};

/// min { f(X) : X subset of domain } with both lattice-extreme minimizers.
/// Dispatches to the exhaustive sweep when |domain| <= exhaustive_threshold.
/// f(empty) must be 0; the min-norm path additionally assumes submodularity.
SfmResult solve_sfm(const SetFunction& f, const Subset& domain, const SolverConfig& config = {});

/// Enumerates every subset. Throws ConsistencyError if the union or the
/// intersection of the minimizers fails to be a minimizer (non-submodular f).
SfmResult solve_sfm_exhaustive(const SetFunction& f, const Subset& domain,
                               const SolverConfig& config = {});

/// SFM through the minimum-norm base; minimizers are read off the level sets
/// of the returned point.
SfmResult solve_sfm_min_norm(const SetFunction& f, const Subset& domain,
                             const SolverConfig& config = {});

/// Approximate minimum-norm point of the base polyhedron
/// { x : x(X) <= f(X) for X in domain, x(domain) = f(domain) }.
/// Throws ConvergenceError when max_iterations is exceeded.
MinNormPoint min_norm_point(const SetFunction& f, const Subset& domain,
                            const SolverConfig& config = {});

/// Extracts min value and extreme minimizers from a (near) minimum-norm
/// point by scanning its sorted level sets.
SfmResult minimizers_from_point(const SetFunction& f, const Subset& domain, const MinNormPoint& p,
                                const SolverConfig& config);

}  // namespace swfair

#endif  // SWFAIR_SFM_HPP_
