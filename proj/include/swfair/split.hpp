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

// Weighted egalitarian rate allocation by recursive splitting.
//
// A call on (C, f, w) sets lambda = f(C) / w(C) and finds the maximal
// minimizer Xhat of f(X) - lambda * w(X). If Xhat = C every user gets
// lambda * w_i. Otherwise Xhat is solved with f, the rest receives the base
// rate f(Xhat) / w(Xhat) * w_i and is then solved with the reduced function
//   g(X) = f(X u Xhat) - f(Xhat) * (w(X) / w(Xhat) + 1),
// whose result is added on top. The two subcalls are independent.

#ifndef SWFAIR_SPLIT_HPP_
#define SWFAIR_SPLIT_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "swfair/set_function.hpp"
#include "swfair/sfm.hpp"
#include "swfair/subset.hpp"

namespace swfair {

enum class ExecutionMode { kSequential, kParallel };

struct SplitOptions {
  SolverConfig solver;
  ExecutionMode mode = ExecutionMode::kSequential;
  /// Store the adaptation path in the tree (only for universes <= 64).
  bool record_path = true;
  /// Forks are made only above this recursion depth; 0 picks a depth from
  /// the available hardware parallelism.
  std::size_t max_fork_depth = 0;
};

struct SplitNode {
  Subset domain;
  double lambda = 0.0;  // f(C) / w(C)
  SfmResult sfm;        // SFM of f - lambda * w over C
  /// f(Xhat) / w(Xhat): per-unit-weight base rate given to C \ Xhat.
  /// Zero for leaves.
  double base_level = 0.0;
  /// Empty for a leaf; otherwise {Xhat branch, complement branch}.
  std::vector<SplitNode> children;

  bool is_leaf() const { return children.empty(); }
};

struct SplitTree {
  SplitNode root;
  Eigen::VectorXd weights;  // universe-length
  Eigen::VectorXd rates;    // final allocation, universe-length
  /// Cumulative rate vectors: zeros, then after each base assignment, then
  /// the final rates. Empty unless recorded.
  std::vector<Eigen::VectorXd> path;
};

struct SplitResult {
  Eigen::VectorXd rates;   // universe-length, zero outside the domain
  /// rates_i / w_i. Users resolved in the same leaf share the exact value.
  Eigen::VectorXd levels;
  SplitTree tree;
};

/// Thrown when a subproblem solve fails; `path()` names the branch, e.g.
/// "root/xhat/rest".
class SplitError : public SolverError {
 public:
  SplitError(const std::string& what, std::string path)
      : SolverError(what + " (at " + path + ")"), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Minimizer of sum r_i^2 / w_i over the base polyhedron of f on `domain`.
/// Requires a nonempty domain, positive weights and submodular f with
/// f(empty) = 0.
SplitResult split(SetFunctionPtr f, const Subset& domain, const WeightVector& w,
                  const SplitOptions& options = {});

/// Recomputes the adaptation path from a completed tree.
std::vector<Eigen::VectorXd> adaptation_path(const SplitTree& tree);

struct RecursionMetrics {
  std::size_t sum_size = 0;  // sum over splits of |Xhat| + |C \ Xhat|
  std::size_t max_size = 0;  // sum over splits of max(|Xhat|, |C \ Xhat|)
  std::size_t node_count = 0;
  std::size_t depth = 0;     // nodes on the longest root-to-leaf chain
};

RecursionMetrics recursion_metrics(const SplitTree& tree);

/// Critical values lambda_1 < ... < lambda_p with the chain S_1 < ... < S_p.
struct Decomposition {
  std::vector<double> critical_values;
  std::vector<Subset> chain;
};

/// Runs split and reads off the critical values and chain. When the domain
/// is within the exhaustive threshold each S_j is re-verified as the maximal
/// minimizer of f - lambda_j w. Throws ConsistencyError on failure.
Decomposition decompose(SetFunctionPtr f, const Subset& domain, const WeightVector& w,
                        const SplitOptions& options = {});

/// Extracts the decomposition from a split result without re-solving.
Decomposition decomposition_from(const SplitResult& result, const Subset& domain,
                                 double tie_epsilon);

/// r_i = lambda_j * w_i for i in S_j \ S_{j-1}.
Eigen::VectorXd reconstruct(const Decomposition& d, const WeightVector& w);

}  // namespace swfair

#endif  // SWFAIR_SPLIT_HPP_
