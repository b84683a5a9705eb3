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

// Set functions over a finite user set: entropy models, explicit tables and
// the compositions used by the splitting recursion.

#ifndef SWFAIR_SET_FUNCTION_HPP_
#define SWFAIR_SET_FUNCTION_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "swfair/subset.hpp"

namespace swfair {

/// Exhaustive (2^n) routines refuse ground sets larger than this by default.
inline constexpr std::size_t kDefaultExhaustiveLimit = 20;

/// Ordered list of distinct user identifiers.
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(std::vector<std::string> users);

  std::size_t size() const { return users_.size(); }
  const std::vector<std::string>& users() const { return users_; }
  const std::string& user(std::size_t i) const { return users_.at(i); }

  /// Position of `user`; throws InvalidSubsetError if unknown.
  std::size_t index(const std::string& user) const;
  bool contains(const std::string& user) const { return index_.count(user) != 0; }

  Subset subset(std::span<const std::string> users) const;
  Subset subset(std::initializer_list<std::string> users) const {
    return subset(std::span<const std::string>(users.begin(), users.size()));
  }
  Subset all() const { return Subset::full(size()); }

  /// Member ids in ground-set order.
  std::vector<std::string> names(const Subset& x) const;

 private:
  std::vector<std::string> users_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Strictly positive per-user weights.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(Eigen::VectorXd values);

  static WeightVector ones(std::size_t n) {
    return WeightVector(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)));
  }

  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  const Eigen::VectorXd& values() const { return values_; }

  /// w(X) = sum of w_i over i in X.
  double sum(const Subset& x) const;

 private:
  Eigen::VectorXd values_;
};

/// Value oracle f: 2^U -> R over a universe U = {0..n-1}.
///
/// Implementations are immutable after construction; eval of the empty set
/// is exactly zero and repeated evaluation is deterministic, so a single
/// oracle may be shared by concurrent solves.
class SetFunction {
 public:
  virtual ~SetFunction() = default;
  virtual std::size_t universe() const = 0;
  virtual double operator()(const Subset& x) const = 0;
};

using SetFunctionPtr = std::shared_ptr<const SetFunction>;

/// Wraps an oracle with a local evaluation tally. Not shared across tasks:
/// each solve owns one and merges its count into its result.
class CountingOracle {
 public:
  explicit CountingOracle(const SetFunction& f) : f_(f) {}
  double operator()(const Subset& x) {
    ++evals_;
    return f_(x);
  }
  std::size_t universe() const { return f_.universe(); }
  std::uint64_t evals() const { return evals_; }

 private:
  const SetFunction& f_;
  std::uint64_t evals_ = 0;
};

/// Entropy of a pool of independent bits observed by users:
/// H(X) = sum of h_j over bits j observed by at least one user in X.
class BitPoolSource final : public SetFunction {
 public:
  struct Bit {
    std::string id;
    double entropy;
  };

  /// `observes[u]` lists bit positions (into `bits`) seen by user u.
  BitPoolSource(std::vector<Bit> bits, std::vector<std::vector<std::size_t>> observes);

  std::size_t universe() const override { return observes_.size(); }
  double operator()(const Subset& x) const override;

  const std::vector<Bit>& bits() const { return bits_; }
  const std::vector<std::vector<std::size_t>>& observes() const { return observes_; }

 private:
  std::vector<Bit> bits_;
  std::vector<std::vector<std::size_t>> observes_;
  std::size_t words_per_user_ = 0;
  std::vector<std::uint64_t> masks_;  // user-major, words_per_user_ each
};

/// Explicit value table over all subsets of a small universe.
class TableSource final : public SetFunction {
 public:
  /// `values[mask]` holds f of the subset with that bitmask; entry 0 must be
  /// zero. Entries set to NaN count as missing and are rejected.
  TableSource(std::size_t universe, std::vector<double> values);

  std::size_t universe() const override { return universe_; }
  double operator()(const Subset& x) const override;

 private:
  std::size_t universe_;
  std::vector<double> values_;
};

/// f(X) = sum of c_i over X.
class ModularFunction final : public SetFunction {
 public:
  explicit ModularFunction(Eigen::VectorXd coefficients) : c_(std::move(coefficients)) {}
  std::size_t universe() const override { return static_cast<std::size_t>(c_.size()); }
  double operator()(const Subset& x) const override;
  const Eigen::VectorXd& coefficients() const { return c_; }

 private:
  Eigen::VectorXd c_;
};

/// f(X) - lambda * w(X).
class ShiftedFunction final : public SetFunction {
 public:
  ShiftedFunction(const SetFunction& f, double lambda, const WeightVector& w)
      : f_(f), lambda_(lambda), w_(w) {}
  std::size_t universe() const override { return f_.universe(); }
  double operator()(const Subset& x) const override;

 private:
  const SetFunction& f_;
  double lambda_;
  const WeightVector& w_;
};

/// Sum of a set function and a modular term: f(X) + c(X).
class ModularShift final : public SetFunction {
 public:
  ModularShift(const SetFunction& f, Eigen::VectorXd c) : f_(f), c_(std::move(c)) {}
  std::size_t universe() const override { return f_.universe(); }
  double operator()(const Subset& x) const override;

 private:
  const SetFunction& f_;
  Eigen::VectorXd c_;
};

/// The reduced function on C \ Xhat used by the complement branch:
/// g(X) = f(X u Xhat) - f(Xhat) * (w(X) / w(Xhat) + 1).
class ReducedFunction final : public SetFunction {
 public:
  ReducedFunction(SetFunctionPtr parent, Subset xhat, std::shared_ptr<const WeightVector> w);

  std::size_t universe() const override { return parent_->universe(); }
  double operator()(const Subset& x) const override;

  const Subset& xhat() const { return xhat_; }
  double parent_at_xhat() const { return f_xhat_; }
  double weight_of_xhat() const { return w_xhat_; }

 private:
  SetFunctionPtr parent_;
  Subset xhat_;
  std::shared_ptr<const WeightVector> w_;
  double f_xhat_;
  double w_xhat_;
};

/// Non-owning SetFunctionPtr for a function whose lifetime the caller manages.
inline SetFunctionPtr borrow(const SetFunction& f) {
  return SetFunctionPtr(std::shared_ptr<const SetFunction>{}, &f);
}

/// A named entropy model: users plus their joint-entropy oracle.
struct SourceModel {
  GroundSet users;
  SetFunctionPtr entropy;
};

// ---------------------------------------------------------------------------
// Operations

/// H(X). Throws InvalidSubsetError if X is over a different universe.
double entropy(const SourceModel& source, const Subset& x);

/// H(X | V \ X) = H(V) - H(V \ X).
double conditional_entropy(const SourceModel& source, const Subset& x);

/// The reduced function on domain \ xhat. Requires a nonempty xhat strictly
/// inside `domain`.
std::shared_ptr<const ReducedFunction> reduce(SetFunctionPtr f, const Subset& domain,
                                              const Subset& xhat,
                                              std::shared_ptr<const WeightVector> w);

/// Greedy base-polyhedron vertex along `order`, which must be a permutation
/// of `domain`: x[order[k]] = f(order[0..k]) - f(order[0..k-1]).
/// Entries outside the domain are zero.
Eigen::VectorXd greedy_vertex(const SetFunction& f, const Subset& domain,
                              std::span<const std::size_t> order);

/// Greedy vertex minimizing <cost, x> over the base polyhedron: members of
/// `domain` are visited by increasing cost, ties broken by index.
Eigen::VectorXd greedy_vertex_by_cost(const SetFunction& f, const Subset& domain,
                                      const Eigen::VectorXd& cost);

/// Witness of a failed diminishing-returns check: x is a subset of y, and
/// element i (outside y) gains more at y than at x.
struct SubmodularityViolation {
  Subset x;
  Subset y;
  std::size_t element;
  double gain_at_x;
  double gain_at_y;
};

struct SubmodularityReport {
  bool submodular = true;
  std::optional<SubmodularityViolation> violation;
};

/// Exhaustive submodularity check over subsets of `domain`. Tolerance is
/// relative to the largest |f| in the table.
SubmodularityReport check_submodular(const SetFunction& f, const Subset& domain,
                                     double tolerance = 1e-10,
                                     std::size_t size_limit = kDefaultExhaustiveLimit);

struct MonotonicityViolation {
  Subset x;
  std::size_t element;
};

struct MonotonicityReport {
  bool monotone = true;
  std::optional<MonotonicityViolation> violation;
};

MonotonicityReport check_monotone(const SetFunction& f, const Subset& domain,
                                  double tolerance = 1e-10,
                                  std::size_t size_limit = kDefaultExhaustiveLimit);

/// Evaluates f on every subset of `domain`, indexed by local mask.
std::vector<double> tabulate(const SetFunction& f, const Subset& domain,
                             std::size_t size_limit = kDefaultExhaustiveLimit);

/// Throws SizeLimitError when |domain| exceeds `size_limit`.
void require_exhaustive_size(const Subset& domain, std::size_t size_limit,
                             const std::string& what);

}  // namespace swfair

#endif  // SWFAIR_SET_FUNCTION_HPP_
