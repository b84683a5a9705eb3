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

#include "swfair/io.hpp"

#include "gtest/gtest.h"
#include "testing.hpp"

namespace swfair {
namespace {

const char* kPool = R"({
  "type": "bit_pool",
  "users": ["1", "2", "3"],
  "bits": {"a": 1.0, "b": 0.5, "c": 0.5, "d": 0.1},
  "observes": {"1": ["a", "b", "c"], "2": ["c", "d"], "3": ["b", "d"]}
})";

TEST(SourceJsonTest, BitPoolMatchesFixture) {
  const SourceModel src = source_from_json(Json::parse(kPool));
  const auto ref = testing::example_pool();
  for (std::uint64_t m = 0; m < 8; ++m) {
    EXPECT_DOUBLE_EQ((*src.entropy)(Subset::from_mask(3, m)), (*ref)(Subset::from_mask(3, m)));
  }
  EXPECT_EQ(src.users.users(), (std::vector<std::string>{"1", "2", "3"}));
}

TEST(SourceJsonTest, RoundTrip) {
  const SourceModel src = source_from_json(Json::parse(kPool));
  const SourceModel back = source_from_json(source_to_json(src));
  for (std::uint64_t m = 0; m < 8; ++m) {
    EXPECT_EQ((*src.entropy)(Subset::from_mask(3, m)), (*back.entropy)(Subset::from_mask(3, m)));
  }

  const SourceModel table = source_from_json(Json::parse(R"({
    "type": "table", "users": ["x", "y"],
    "values": {"x": 1.0, "y": 2.0, "x,y": 2.5}
  })"));
  const SourceModel table_back = source_from_json(source_to_json(table));
  EXPECT_EQ((*table_back.entropy)(Subset(2, {0, 1})), 2.5);
  EXPECT_EQ((*table_back.entropy)(Subset(2)), 0.0);
}

TEST(SourceJsonTest, Errors) {
  EXPECT_THROW(source_from_json(Json::parse(R"({"type": "gaussian", "users": ["a"]})")), LoadError);
  try {
    source_from_json(Json::parse(R"({"type": "gaussian", "users": ["a"]})"));
  } catch (const LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("gaussian"), std::string::npos);
  }
  EXPECT_THROW(source_from_json(Json::parse(R"({"users": ["a"]})")), LoadError);
  EXPECT_THROW(source_from_json(Json::parse(R"({
    "type": "table", "users": ["x", "y"], "values": {"x": 1.0, "y": 2.0}
  })")),
               IncompleteTableError);
  EXPECT_THROW(source_from_json(Json::parse(R"({
    "type": "bit_pool", "users": ["1"], "bits": {"a": 1.0}, "observes": {"1": ["z"]}
  })")),
               LoadError);
  EXPECT_THROW(source_from_json(Json::parse(R"({
    "type": "bit_pool", "users": ["1"], "bits": {"a": -1.0}, "observes": {"1": ["a"]}
  })")),
               InputError);
}

TEST(WeightsTest, ParseAndErrors) {
  const GroundSet users({"1", "2", "3"});
  const WeightVector w = parse_weights("3, 1,3", users);
  EXPECT_EQ(w.values(), testing::vec({3, 1, 3}));
  EXPECT_THROW(parse_weights("3,1", users), InputError);
  EXPECT_THROW(parse_weights("3,x,1", users), InputError);
  EXPECT_THROW(parse_weights("3,0,1", users), InputError);
}

TEST(RatesTest, JsonAndCsvRoundTrip) {
  const GroundSet users({"alice", "bob"});
  const Eigen::VectorXd r = testing::vec({0.1 + 0.2, 1.0 / 3.0});
  EXPECT_EQ(rates_from_json(rates_to_json(users, r), users), r);
  EXPECT_EQ(rates_from_json(Json{{"rates", rates_to_json(users, r)}}, users), r);
  EXPECT_EQ(rates_from_csv(rates_to_csv(users, r), users), r);
  EXPECT_THROW(rates_from_json(Json::parse(R"({"alice": 1.0})"), users), InputError);
  EXPECT_THROW(rates_from_csv("alice,carol\n1,2\n", users), InputError);
}

TEST(ReportJsonTest, SplitTreeCarriesPathAndMetrics) {
  const SourceModel src = source_from_json(Json::parse(kPool));
  const SplitResult r = split(src.entropy, src.users.all(), WeightVector::ones(3));
  const Json j = split_tree_to_json(src.users, r.tree);
  EXPECT_EQ(j["path"].size(), 3u);
  EXPECT_EQ(j["metrics"]["sum_size"], 3);
  EXPECT_DOUBLE_EQ(j["rates"]["1"].get<double>(), r.rates[0]);
}

}  // namespace
}  // namespace swfair
