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

#include "swfair/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "swfair/errors.hpp"

namespace swfair {

void ExperimentConfig::validate() const {
  if (n_min < 2) throw PreconditionError("n_min must be at least 2");
  if (n_max < n_min) throw PreconditionError("n_max must be at least n_min");
  if (repetitions < 1) throw PreconditionError("repetitions must be at least 1");
  if (!(observe_prob > 0.0 && observe_prob <= 1.0)) {
    throw PreconditionError("observe_prob must lie in (0, 1]");
  }
  if (!(pool_factor > 0.0)) throw PreconditionError("pool_factor must be positive");
  if (!(entropy_low >= 0.0 && entropy_high > entropy_low)) {
    throw PreconditionError("entropy range must satisfy 0 <= low < high");
  }
  solver.validate();
}

BitPoolSource generate_instance(std::size_t n, const ExperimentConfig& config,
                                std::size_t rep_index) {
  if (n < 2) throw PreconditionError("instances need at least 2 users");
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(rep_index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto bit_count =
      static_cast<std::size_t>(std::ceil(config.pool_factor * static_cast<double>(n)));
  std::vector<BitPoolSource::Bit> bits;
  bits.reserve(bit_count);
  for (std::size_t j = 0; j < bit_count; ++j) {
    // 1 - u maps [0, 1) onto (0, 1], so no bit has zero entropy.
    const double u = 1.0 - unit(rng);
    bits.push_back({"b" + std::to_string(j),
                    config.entropy_low + u * (config.entropy_high - config.entropy_low)});
  }

  std::vector<std::vector<std::size_t>> observes(n);
  for (std::size_t user = 0; user < n; ++user) {
    do {
      observes[user].clear();
      for (std::size_t j = 0; j < bit_count; ++j) {
        if (unit(rng) < config.observe_prob) observes[user].push_back(j);
      }
    } while (observes[user].empty());
  }
  return BitPoolSource(std::move(bits), std::move(observes));
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config,
                                          const ExclusionLogger& log) {
  config.validate();
  using clock = std::chrono::steady_clock;
  std::vector<ExperimentRow> rows;

  for (std::size_t n = config.n_min; n <= config.n_max; ++n) {
    ExperimentRow row;
    row.n = n;
    double sum_size = 0.0;
    double max_size = 0.0;
    double nodes = 0.0;
    double wall_seq = 0.0;
    double wall_par = 0.0;
    std::size_t used = 0;

    const WeightVector w = WeightVector::ones(n);
    SplitOptions seq_options;
    seq_options.solver = config.solver;
    seq_options.record_path = false;
    SplitOptions par_options = seq_options;
    par_options.mode = ExecutionMode::kParallel;

    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      const BitPoolSource source = generate_instance(n, config, rep);
      const Subset all = Subset::full(n);
      try {
        const auto t0 = clock::now();
        const SplitResult result = split(borrow(source), all, w, seq_options);
        const auto t1 = clock::now();
        if (config.parallel && config.timing) {
          split(borrow(source), all, w, par_options);
          wall_par += std::chrono::duration<double>(clock::now() - t1).count();
        }
        if (config.timing) wall_seq += std::chrono::duration<double>(t1 - t0).count();

        const RecursionMetrics m = recursion_metrics(result.tree);
        sum_size += static_cast<double>(m.sum_size);
        max_size += static_cast<double>(m.max_size);
        nodes += static_cast<double>(m.node_count);
        ++used;
      } catch (const SolverError& e) {
        ++row.excluded;
        if (log) log(n, rep, e.what());
      } catch (const ConsistencyError& e) {
        ++row.excluded;
        if (log) log(n, rep, e.what());
      }
    }

    if (used > 0) {
      const double k = static_cast<double>(used);
      row.mean_sum_size = sum_size / k;
      row.mean_max_size = max_size / k;
      row.mean_node_count = nodes / k;
      row.wall_seq_s = wall_seq / k;
      row.wall_par_s = wall_par / k;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kExperimentCsvHeader << '\n';
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%zu,%.6f,%.6f,%.6f,%zu,%.6f,%.6f\n", r.n, r.mean_sum_size,
                  r.mean_max_size, r.mean_node_count, r.excluded, r.wall_seq_s, r.wall_par_s);
    out << line;
  }
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  write_experiment_csv(os, rows);
  return os.str();
}

}  // namespace swfair
