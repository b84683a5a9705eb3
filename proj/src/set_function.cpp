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

#include "swfair/set_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "swfair/errors.hpp"

namespace swfair {

// ---------------------------------------------------------------------------
// GroundSet

GroundSet::GroundSet(std::vector<std::string> users) : users_(std::move(users)) {
  if (users_.empty()) throw InputError("ground set must contain at least one user");
  for (std::size_t i = 0; i < users_.size(); ++i) {
    if (!index_.emplace(users_[i], i).second) {
      throw InputError("duplicate user id '" + users_[i] + "'");
    }
  }
}

std::size_t GroundSet::index(const std::string& user) const {
  auto it = index_.find(user);
  if (it == index_.end()) throw InvalidSubsetError("unknown user '" + user + "'");
  return it->second;
}

Subset GroundSet::subset(std::span<const std::string> users) const {
  Subset s(size());
  for (const auto& u : users) s.insert(index(u));
  return s;
}

std::vector<std::string> GroundSet::names(const Subset& x) const {
  std::vector<std::string> out;
  x.for_each([&](std::size_t i) { out.push_back(users_.at(i)); });
  return out;
}

// ---------------------------------------------------------------------------
// WeightVector

WeightVector::WeightVector(Eigen::VectorXd values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw PreconditionError("weight " + std::to_string(i) + " must be positive and finite, got " +
                              std::to_string(values_[i]));
    }
  }
}

double WeightVector::sum(const Subset& x) const {
  double total = 0.0;
  x.for_each([&](std::size_t i) { total += values_[static_cast<Eigen::Index>(i)]; });
  return total;
}

// ---------------------------------------------------------------------------
// BitPoolSource

BitPoolSource::BitPoolSource(std::vector<Bit> bits, std::vector<std::vector<std::size_t>> observes)
    : bits_(std::move(bits)), observes_(std::move(observes)) {
  if (observes_.empty()) throw InputError("bit-pool source needs at least one user");
  for (const auto& b : bits_) {
    if (!(b.entropy > 0.0) || !std::isfinite(b.entropy)) {
      throw InputError("bit '" + b.id + "' must have positive finite entropy");
    }
  }
  words_per_user_ = std::max<std::size_t>(1, (bits_.size() + 63) / 64);
  masks_.assign(observes_.size() * words_per_user_, 0);
  for (std::size_t u = 0; u < observes_.size(); ++u) {
    for (std::size_t j : observes_[u]) {
      if (j >= bits_.size()) {
        throw InputError("user " + std::to_string(u) + " observes unknown bit " + std::to_string(j));
      }
      masks_[u * words_per_user_ + (j >> 6)] |= std::uint64_t{1} << (j & 63);
    }
  }
}

double BitPoolSource::operator()(const Subset& x) const {
  if (x.universe() != universe()) throw InvalidSubsetError("subset universe does not match source");
  constexpr std::size_t kInline = 16;
  std::array<std::uint64_t, kInline> inline_buf{};
  std::vector<std::uint64_t> heap_buf;
  std::uint64_t* cover = inline_buf.data();
  if (words_per_user_ > kInline) {
    heap_buf.assign(words_per_user_, 0);
    cover = heap_buf.data();
  }
  x.for_each([&](std::size_t u) {
    const std::uint64_t* m = &masks_[u * words_per_user_];
    for (std::size_t w = 0; w < words_per_user_; ++w) cover[w] |= m[w];
  });
  double total = 0.0;
  for (std::size_t w = 0; w < words_per_user_; ++w) {
    std::uint64_t bits = cover[w];
    while (bits != 0) {
      total += bits_[w * 64 + static_cast<std::size_t>(std::countr_zero(bits))].entropy;
      bits &= bits - 1;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// TableSource

TableSource::TableSource(std::size_t universe, std::vector<double> values)
    : universe_(universe), values_(std::move(values)) {
  if (universe == 0 || universe > kDefaultExhaustiveLimit) {
    throw InputError("table sources support 1.." + std::to_string(kDefaultExhaustiveLimit) +
                     " users, got " + std::to_string(universe));
  }
  if (values_.size() != (std::size_t{1} << universe)) {
    throw IncompleteTableError("table needs " + std::to_string(std::size_t{1} << universe) +
                               " entries, got " + std::to_string(values_.size()));
  }
  if (std::isnan(values_[0])) values_[0] = 0.0;
  if (values_[0] != 0.0) throw InputError("table value of the empty set must be 0");
  for (std::size_t m = 1; m < values_.size(); ++m) {
    if (std::isnan(values_[m])) {
      throw IncompleteTableError("table is missing subset " +
                                 Subset::from_mask(universe, m).to_string());
    }
  }
}

double TableSource::operator()(const Subset& x) const {
  if (x.universe() != universe_) throw InvalidSubsetError("subset universe does not match table");
  return values_[x.mask()];
}

// ---------------------------------------------------------------------------
// Compositions

double ModularFunction::operator()(const Subset& x) const {
  double total = 0.0;
  x.for_each([&](std::size_t i) { total += c_[static_cast<Eigen::Index>(i)]; });
  return total;
}

double ShiftedFunction::operator()(const Subset& x) const {
  return f_(x) - lambda_ * w_.sum(x);
}

double ModularShift::operator()(const Subset& x) const {
  double total = f_(x);
  x.for_each([&](std::size_t i) { total += c_[static_cast<Eigen::Index>(i)]; });
  return total;
}

ReducedFunction::ReducedFunction(SetFunctionPtr parent, Subset xhat,
                                 std::shared_ptr<const WeightVector> w)
    : parent_(std::move(parent)), xhat_(std::move(xhat)), w_(std::move(w)) {
  f_xhat_ = (*parent_)(xhat_);
  w_xhat_ = w_->sum(xhat_);
}

double ReducedFunction::operator()(const Subset& x) const {
  if (x.empty()) return 0.0;
  return (*parent_)(x | xhat_) - f_xhat_ * (w_->sum(x) / w_xhat_ + 1.0);
}

// ---------------------------------------------------------------------------
// Operations

namespace {

void require_universe(const Subset& x, std::size_t n) {
  if (x.universe() != n) {
    throw InvalidSubsetError("subset over universe of size " + std::to_string(x.universe()) +
                             " used with a function over " + std::to_string(n) + " users");
  }
}

}  // namespace

void require_exhaustive_size(const Subset& domain, std::size_t size_limit,
                             const std::string& what) {
  if (domain.size() > size_limit) {
    throw SizeLimitError(what + " enumerates all subsets and is limited to " +
                         std::to_string(size_limit) + " users; got " +
                         std::to_string(domain.size()));
  }
}

double entropy(const SourceModel& source, const Subset& x) {
  require_universe(x, source.users.size());
  return (*source.entropy)(x);
}

double conditional_entropy(const SourceModel& source, const Subset& x) {
  require_universe(x, source.users.size());
  const Subset all = source.users.all();
  return (*source.entropy)(all) - (*source.entropy)(all - x);
}

std::shared_ptr<const ReducedFunction> reduce(SetFunctionPtr f, const Subset& domain,
                                              const Subset& xhat,
                                              std::shared_ptr<const WeightVector> w) {
  require_universe(xhat, f->universe());
  require_universe(domain, f->universe());
  if (xhat.empty()) throw InvalidReductionError("reduction set must be nonempty");
  if (!xhat.is_subset_of(domain)) throw InvalidReductionError("reduction set must lie in the domain");
  if (xhat == domain) throw InvalidReductionError("reduction set must be a strict subset of the domain");
  return std::make_shared<const ReducedFunction>(std::move(f), xhat, std::move(w));
}

Eigen::VectorXd greedy_vertex(const SetFunction& f, const Subset& domain,
                              std::span<const std::size_t> order) {
  const std::size_t n = f.universe();
  require_universe(domain, n);
  if (order.size() != domain.size()) {
    throw InputError("order has " + std::to_string(order.size()) + " entries, domain has " +
                     std::to_string(domain.size()));
  }
  Subset seen(n);
  for (std::size_t i : order) {
    if (i >= n || !domain.contains(i) || seen.contains(i)) {
      throw InputError("order is not a permutation of the domain");
    }
    seen.insert(i);
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Subset prefix(n);
  double previous = 0.0;
  for (std::size_t i : order) {
    prefix.insert(i);
    const double value = f(prefix);
    x[static_cast<Eigen::Index>(i)] = value - previous;
    previous = value;
  }
  return x;
}

Eigen::VectorXd greedy_vertex_by_cost(const SetFunction& f, const Subset& domain,
                                      const Eigen::VectorXd& cost) {
  std::vector<std::size_t> order = domain.members();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return cost[static_cast<Eigen::Index>(a)] < cost[static_cast<Eigen::Index>(b)];
  });
  return greedy_vertex(f, domain, order);
}

std::vector<double> tabulate(const SetFunction& f, const Subset& domain, std::size_t size_limit) {
  require_universe(domain, f.universe());
  require_exhaustive_size(domain, size_limit, "tabulation");
  SubsetEnumerator en(domain);
  std::vector<double> table(en.count());
  for (std::uint64_t m = 0; m < en.count(); ++m) table[m] = m == 0 ? 0.0 : f(en.at(m));
  return table;
}

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

SubmodularityReport check_submodular(const SetFunction& f, const Subset& domain, double tolerance,
                                     std::size_t size_limit) {
  require_exhaustive_size(domain, size_limit, "submodularity check");
  const std::vector<double> table = tabulate(f, domain, size_limit);
  const double tol = tolerance * std::max(1.0, max_abs(table));
  SubsetEnumerator en(domain);
  const std::size_t m = en.domain_size();

  // Local form: f(X+i) + f(X+j) >= f(X+i+j) + f(X) for i != j outside X.
  // It is equivalent to diminishing returns over all nested pairs.
  for (std::uint64_t x = 0; x < en.count(); ++x) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t bi = std::uint64_t{1} << i;
      if (x & bi) continue;
      for (std::size_t j = 0; j < m; ++j) {
        const std::uint64_t bj = std::uint64_t{1} << j;
        if (j == i || (x & bj)) continue;
        const double gain_x = table[x | bi] - table[x];
        const double gain_y = table[x | bj | bi] - table[x | bj];
        if (gain_y > gain_x + tol) {
          return {false, SubmodularityViolation{en.at(x), en.at(x | bj), en.members()[i], gain_x,
                                                gain_y}};
        }
      }
    }
  }
  return {};
}

MonotonicityReport check_monotone(const SetFunction& f, const Subset& domain, double tolerance,
                                  std::size_t size_limit) {
  require_exhaustive_size(domain, size_limit, "monotonicity check");
  const std::vector<double> table = tabulate(f, domain, size_limit);
  const double tol = tolerance * std::max(1.0, max_abs(table));
  SubsetEnumerator en(domain);
  for (std::uint64_t x = 0; x < en.count(); ++x) {
    for (std::size_t i = 0; i < en.domain_size(); ++i) {
      const std::uint64_t bi = std::uint64_t{1} << i;
      if (x & bi) continue;
      if (table[x | bi] < table[x] - tol) {
        return {false, MonotonicityViolation{en.at(x), en.members()[i]}};
      }
    }
  }
  return {};
}

}  // namespace swfair
