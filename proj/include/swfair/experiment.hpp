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

// Random bit-pool instances and the sequential-vs-parallel SFM size sweep.

#ifndef SWFAIR_EXPERIMENT_HPP_
#define SWFAIR_EXPERIMENT_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "swfair/set_function.hpp"
#include "swfair/split.hpp"

namespace swfair {

struct ExperimentConfig {
  std::size_t n_min = 3;
  std::size_t n_max = 80;
  std::size_t repetitions = 100;
  std::uint64_t seed = 1;
  double pool_factor = 3.0;    // bits per user
  double observe_prob = 0.3;   // chance a user observes a given bit
  double entropy_low = 0.0;    // bit entropies are uniform on (low, high]
  double entropy_high = 1.0;
  /// Also time the parallel split mode.
  bool parallel = true;
  /// Measure wall time; when off the time columns are written as 0 so the
  /// CSV is byte-for-byte reproducible.
  bool timing = true;
  SolverConfig solver;

  void validate() const;
};

struct ExperimentRow {
  std::size_t n = 0;
  double mean_sum_size = 0.0;
  double mean_max_size = 0.0;
  double mean_node_count = 0.0;
  std::size_t excluded = 0;
  double wall_seq_s = 0.0;
  double wall_par_s = 0.0;
};

/// Bit-pool source with ceil(pool_factor * n) bits; deterministic in
/// (seed, n, rep_index). Users left with no bits are redrawn.
BitPoolSource generate_instance(std::size_t n, const ExperimentConfig& config,
                                std::size_t rep_index);

/// Optional per-instance failure hook (n, rep_index, message).
using ExclusionLogger = std::function<void(std::size_t, std::size_t, const std::string&)>;

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config,
                                          const ExclusionLogger& log = {});

inline constexpr const char* kExperimentCsvHeader =
    "n,mean_sum_size,mean_max_size,mean_node_count,excluded,wall_seq_s,wall_par_s";

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::string experiment_csv(const std::vector<ExperimentRow>& rows);

}  // namespace swfair

#endif  // SWFAIR_EXPERIMENT_HPP_
