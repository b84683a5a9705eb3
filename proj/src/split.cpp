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

#include "swfair/split.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <memory>
#include <thread>

#include "swfair/errors.hpp"

namespace swfair {

namespace {

class Splitter {
 public:
  Splitter(std::shared_ptr<const WeightVector> w, const SplitOptions& options,
           Eigen::VectorXd& levels)
      : w_(std::move(w)), options_(options), levels_(levels) {
    fork_depth_ = options.max_fork_depth;
    if (options.mode == ExecutionMode::kParallel && fork_depth_ == 0) {
      const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
      fork_depth_ = static_cast<std::size_t>(std::bit_width(hw)) + 1;
    }
  }

  SplitNode run(const SetFunctionPtr& f, const Subset& domain, std::size_t depth,
                const std::string& path) const {
    SplitNode node;
    node.domain = domain;
    node.lambda = (*f)(domain) / w_->sum(domain);

    const ShiftedFunction shifted(*f, node.lambda, *w_);
    SolverConfig config = options_.solver;
    config.tie_scale = std::max(config.tie_scale, std::abs((*f)(domain)));
    try {
      node.sfm = solve_sfm(shifted, domain, config);
    } catch (const ConvergenceError& e) {
      throw SplitError(e.what(), path);
    } catch (const ConsistencyError& e) {
      throw SplitError(e.what(), path);
    }

    const Subset& xhat = node.sfm.maximal_minimizer;
    if (xhat == domain) {
      domain.for_each([&](std::size_t i) { levels_[static_cast<Eigen::Index>(i)] += node.lambda; });
      return node;
    }
    if (xhat.empty()) {
      // f(C) - lambda w(C) = 0 makes C a minimizer, so this only happens
      // when the solver output is inconsistent.
      throw SplitError("empty maximal minimizer", path);
    }

    const Subset rest = domain - xhat;
    node.base_level = (*f)(xhat) / w_->sum(xhat);
    const SetFunctionPtr g = reduce(f, domain, xhat, w_);

    auto solve_xhat = [&] { return run(f, xhat, depth + 1, path + "/xhat"); };
    auto solve_rest = [&] {
      rest.for_each([&](std::size_t i) { levels_[static_cast<Eigen::Index>(i)] += node.base_level; });
      return run(g, rest, depth + 1, path + "/rest");
    };

    node.children.reserve(2);
    if (options_.mode == ExecutionMode::kParallel && depth < fork_depth_) {
      // The branches write disjoint entries of levels_ and share only
      // immutable oracles.
      auto xhat_future = std::async(std::launch::async, solve_xhat);
      SplitNode rest_node = solve_rest();
      node.children.push_back(xhat_future.get());
      node.children.push_back(std::move(rest_node));
    } else {
      node.children.push_back(solve_xhat());
      node.children.push_back(solve_rest());
    }
    return node;
  }

 private:
  std::shared_ptr<const WeightVector> w_;
  const SplitOptions& options_;
  Eigen::VectorXd& levels_;
  std::size_t fork_depth_ = 0;
};

void path_events(const SplitNode& node, const Eigen::VectorXd& w, Eigen::VectorXd& levels,
                 std::vector<Eigen::VectorXd>& out) {
  if (node.is_leaf()) return;
  path_events(node.children[0], w, levels, out);
  node.children[1].domain.for_each(
      [&](std::size_t i) { levels[static_cast<Eigen::Index>(i)] += node.base_level; });
  out.push_back(levels.cwiseProduct(w));
  path_events(node.children[1], w, levels, out);
}

void collect_metrics(const SplitNode& node, std::size_t depth, RecursionMetrics& m) {
  ++m.node_count;
  m.depth = std::max(m.depth, depth);
  if (node.is_leaf()) return;
  const std::size_t a = node.children[0].domain.size();
  const std::size_t b = node.children[1].domain.size();
  m.sum_size += a + b;
  m.max_size += std::max(a, b);
  for (const auto& c : node.children) collect_metrics(c, depth + 1, m);
}

void collect_leaves(const SplitNode& node, std::vector<const SplitNode*>& out) {
  if (node.is_leaf()) {
    out.push_back(&node);
    return;
  }
  for (const auto& c : node.children) collect_leaves(c, out);
}

}  // namespace

SplitResult split(SetFunctionPtr f, const Subset& domain, const WeightVector& w,
                  const SplitOptions& options) {
  options.solver.validate();
  const std::size_t n = f->universe();
  if (domain.universe() != n) throw InvalidSubsetError("domain universe does not match the function");
  if (domain.empty()) throw PreconditionError("split needs a nonempty user set");
  if (w.size() != n) {
    throw PreconditionError("weight vector has " + std::to_string(w.size()) + " entries for " +
                            std::to_string(n) + " users");
  }

  auto weights = std::make_shared<const WeightVector>(w);
  SplitResult out;
  out.levels = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Splitter splitter(weights, options, out.levels);
  out.tree.root = splitter.run(f, domain, 0, "root");

  out.rates = out.levels.cwiseProduct(w.values());
  out.tree.weights = w.values();
  out.tree.rates = out.rates;
  if (options.record_path && n <= 64) out.tree.path = adaptation_path(out.tree);
  return out;
}

std::vector<Eigen::VectorXd> adaptation_path(const SplitTree& tree) {
  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXd levels = Eigen::VectorXd::Zero(tree.weights.size());
  out.push_back(levels);
  path_events(tree.root, tree.weights, levels, out);
  out.push_back(tree.rates);
  return out;
}

RecursionMetrics recursion_metrics(const SplitTree& tree) {
  RecursionMetrics m;
  collect_metrics(tree.root, 1, m);
  return m;
}

Decomposition decomposition_from(const SplitResult& result, const Subset& domain,
                                 double tie_epsilon) {
  std::vector<const SplitNode*> leaves;
  collect_leaves(result.tree.root, leaves);

  struct Block {
    double level;
    Subset members;
  };
  std::vector<Block> blocks;
  double scale = 0.0;
  for (const SplitNode* leaf : leaves) {
    const double level = result.levels[static_cast<Eigen::Index>(leaf->domain.members().front())];
    blocks.push_back({level, leaf->domain});
    scale = std::max(scale, std::abs(level));
  }
  std::sort(blocks.begin(), blocks.end(),
            [](const Block& a, const Block& b) { return a.level < b.level; });

  Decomposition d;
  Subset running(domain.universe());
  const double tol = tie_epsilon * std::max(scale, 1.0);
  for (const Block& b : blocks) {
    if (!d.critical_values.empty() && b.level <= d.critical_values.back() + tol) {
      throw ConsistencyError("critical values are not strictly increasing: " +
                             std::to_string(d.critical_values.back()) + " then " +
                             std::to_string(b.level));
    }
    running |= b.members;
    d.critical_values.push_back(b.level);
    d.chain.push_back(running);
  }
  if (running != domain) throw ConsistencyError("split leaves do not cover the domain");
  return d;
}

Decomposition decompose(SetFunctionPtr f, const Subset& domain, const WeightVector& w,
                        const SplitOptions& options) {
  const SplitResult result = split(f, domain, w, options);
  Decomposition d = decomposition_from(result, domain, options.solver.tie_epsilon);

  if (domain.size() <= options.solver.exhaustive_threshold) {
    SolverConfig config = options.solver;
    config.tie_scale = std::max(config.tie_scale, std::abs((*f)(domain)));
    for (std::size_t j = 0; j < d.chain.size(); ++j) {
      const ShiftedFunction shifted(*f, d.critical_values[j], w);
      const SfmResult check = solve_sfm_exhaustive(shifted, domain, config);
      if (check.maximal_minimizer != d.chain[j]) {
        throw ConsistencyError("chain set " + d.chain[j].to_string() +
                               " is not the maximal minimizer at critical value " +
                               std::to_string(d.critical_values[j]) + " (found " +
                               check.maximal_minimizer.to_string() + ")");
      }
    }
  }
  return d;
}

Eigen::VectorXd reconstruct(const Decomposition& d, const WeightVector& w) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(w.size()));
  Subset previous(w.size());
  for (std::size_t j = 0; j < d.chain.size(); ++j) {
    (d.chain[j] - previous).for_each([&](std::size_t i) {
      r[static_cast<Eigen::Index>(i)] = d.critical_values[j] * w[i];
    });
    previous = d.chain[j];
  }
  return r;
}

}  // namespace swfair
