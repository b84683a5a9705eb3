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

// JSON and CSV formats for source models, weights, rates and solver traces.
//
// Source models:
//   {"type":"bit_pool","users":[...],"bits":{"a":1.0,...},"observes":{"1":["a",...],...}}
//   {"type":"table","users":[...],"values":{"1":2.0,"1,2":2.1,...}}
// Table keys are comma-joined user ids; every nonempty subset must appear.

#ifndef SWFAIR_IO_HPP_
#define SWFAIR_IO_HPP_

#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "json.hpp"
#include "swfair/fairness.hpp"
#include "swfair/set_function.hpp"
#include "swfair/sfm.hpp"
#include "swfair/split.hpp"

namespace swfair {

using Json = nlohmann::ordered_json;

SourceModel source_from_json(const Json& j);
SourceModel load_source(const std::filesystem::path& path);
/// Serializes bit-pool and table sources; other oracles are tabulated when
/// small enough.
Json source_to_json(const SourceModel& source);

/// Parses "3,1,3" into weights for `users`.
WeightVector parse_weights(const std::string& list, const GroundSet& users);
/// JSON array, JSON {"user": w} map, or a comma-separated line.
WeightVector load_weights(const std::filesystem::path& path, const GroundSet& users);

/// {"user": rate, ...} in ground-set order.
Json rates_to_json(const GroundSet& users, const Eigen::VectorXd& rates);
/// Accepts a flat {"user": rate} map or an object with a "rates" member.
/// Every user must be present.
Eigen::VectorXd rates_from_json(const Json& j, const GroundSet& users);
/// Header line of user ids followed by one row of rates.
std::string rates_to_csv(const GroundSet& users, const Eigen::VectorXd& rates);
Eigen::VectorXd rates_from_csv(const std::string& text, const GroundSet& users);
/// Dispatches on content: JSON when the first non-blank character is '{'.
Eigen::VectorXd load_rates(const std::filesystem::path& path, const GroundSet& users);

Json subset_to_json(const GroundSet& users, const Subset& x);
Json sfm_result_to_json(const GroundSet& users, const SfmResult& r);
Json split_tree_to_json(const GroundSet& users, const SplitTree& tree);
Json metrics_to_json(const RecursionMetrics& m);
Json decomposition_to_json(const GroundSet& users, const Decomposition& d);
Json membership_to_json(const GroundSet& users, const MembershipReport& m);
Json fairness_report_to_json(const GroundSet& users, const FairnessReport& r);

std::string read_file(const std::filesystem::path& path);

}  // namespace swfair

#endif  // SWFAIR_IO_HPP_
