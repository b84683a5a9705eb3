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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "swfair/errors.hpp"

namespace swfair {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw LoadError("cannot parse " + what + " '" + text + "' as a number");
  }
}

double json_number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw LoadError(what + " must be a number");
  return j.get<double>();
}

GroundSet users_from_json(const Json& j) {
  if (!j.contains("users") || !j["users"].is_array()) {
    throw LoadError("source model needs a \"users\" array");
  }
  std::vector<std::string> users;
  for (const auto& u : j["users"]) {
    if (!u.is_string()) throw LoadError("user ids must be strings");
    users.push_back(u.get<std::string>());
  }
  try {
    return GroundSet(std::move(users));
  } catch (const InputError& e) {
    throw LoadError(e.what());
  }
}

SourceModel bit_pool_from_json(const Json& j) {
  GroundSet users = users_from_json(j);
  if (!j.contains("bits") || !j["bits"].is_object()) throw LoadError("bit_pool needs a \"bits\" object");
  std::vector<BitPoolSource::Bit> bits;
  std::unordered_map<std::string, std::size_t> bit_index;
  for (const auto& [id, h] : j["bits"].items()) {
    bit_index.emplace(id, bits.size());
    bits.push_back({id, json_number(h, "entropy of bit '" + id + "'")});
  }
  std::vector<std::vector<std::size_t>> observes(users.size());
  if (!j.contains("observes") || !j["observes"].is_object()) {
    throw LoadError("bit_pool needs an \"observes\" object");
  }
  for (const auto& [user, list] : j["observes"].items()) {
    if (!users.contains(user)) throw LoadError("observes names unknown user '" + user + "'");
    if (!list.is_array()) throw LoadError("observes entry for '" + user + "' must be an array");
    auto& target = observes[users.index(user)];
    for (const auto& b : list) {
      if (!b.is_string()) throw LoadError("bit ids must be strings");
      auto it = bit_index.find(b.get<std::string>());
      if (it == bit_index.end()) {
        throw LoadError("user '" + user + "' observes unknown bit '" + b.get<std::string>() + "'");
      }
      target.push_back(it->second);
    }
  }
  try {
    auto source = std::make_shared<const BitPoolSource>(std::move(bits), std::move(observes));
    return {std::move(users), std::move(source)};
  } catch (const InputError& e) {
    throw LoadError(e.what());
  }
}

SourceModel table_from_json(const Json& j) {
  GroundSet users = users_from_json(j);
  if (users.size() > kDefaultExhaustiveLimit) {
    throw LoadError("table sources support at most " + std::to_string(kDefaultExhaustiveLimit) +
                    " users");
  }
  if (!j.contains("values") || !j["values"].is_object()) throw LoadError("table needs a \"values\" object");
  std::vector<double> values(std::size_t{1} << users.size(),
                             std::numeric_limits<double>::quiet_NaN());
  values[0] = 0.0;
  for (const auto& [key, v] : j["values"].items()) {
    Subset x(users.size());
    if (!trim(key).empty()) {
      for (const auto& id : split_commas(key)) {
        if (!users.contains(id)) throw LoadError("table key '" + key + "' names unknown user '" + id + "'");
        x.insert(users.index(id));
      }
    }
    values[x.mask()] = json_number(v, "table value for '" + key + "'");
  }
  try {
    auto source = std::make_shared<const TableSource>(users.size(), std::move(values));
    return {std::move(users), std::move(source)};
  } catch (const IncompleteTableError& e) {
    throw;
  } catch (const InputError& e) {
    throw LoadError(e.what());
  }
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k) out += ",";
    out += ids[k];
  }
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

SourceModel source_from_json(const Json& j) {
  if (!j.is_object()) throw LoadError("source model must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) throw LoadError("source model needs a \"type\" string");
  const std::string type = j["type"].get<std::string>();
  if (type == "bit_pool") return bit_pool_from_json(j);
  if (type == "table") return table_from_json(j);
  throw LoadError("unknown source type \"" + type + "\"");
}

SourceModel load_source(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw LoadError("'" + path.string() + "': " + e.what());
  }
  return source_from_json(j);
}

Json source_to_json(const SourceModel& source) {
  Json j;
  j["users"] = source.users.users();
  if (const auto* pool = dynamic_cast<const BitPoolSource*>(source.entropy.get())) {
    j["type"] = "bit_pool";
    Json bits = Json::object();
    for (const auto& b : pool->bits()) bits[b.id] = b.entropy;
    j["bits"] = bits;
    Json observes = Json::object();
    for (std::size_t u = 0; u < pool->observes().size(); ++u) {
      Json list = Json::array();
      for (std::size_t b : pool->observes()[u]) list.push_back(pool->bits()[b].id);
      observes[source.users.user(u)] = list;
    }
    j["observes"] = observes;
  } else {
    j["type"] = "table";
    const std::vector<double> table = tabulate(*source.entropy, source.users.all());
    SubsetEnumerator en(source.users.all());
    Json values = Json::object();
    for (std::uint64_t m = 1; m < en.count(); ++m) {
      values[join_ids(source.users.names(en.at(m)))] = table[m];
    }
    j["values"] = values;
  }
  // Keep "type" first for readability.
  Json ordered;
  ordered["type"] = j["type"];
  for (const auto& [k, v] : j.items()) {
    if (k != "type") ordered[k] = v;
  }
  return ordered;
}

WeightVector parse_weights(const std::string& list, const GroundSet& users) {
  const auto items = split_commas(list);
  if (items.size() != users.size()) {
    throw InputError("got " + std::to_string(items.size()) + " weights for " +
                     std::to_string(users.size()) + " users");
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) {
    w[static_cast<Eigen::Index>(i)] = parse_number(items[i], "weight");
  }
  return WeightVector(std::move(w));
}

WeightVector load_weights(const std::filesystem::path& path, const GroundSet& users) {
  const std::string text = trim(read_file(path));
  if (!text.empty() && (text.front() == '[' || text.front() == '{')) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw LoadError("'" + path.string() + "': " + e.what());
    }
    Eigen::VectorXd w(static_cast<Eigen::Index>(users.size()));
    if (j.is_array()) {
      if (j.size() != users.size()) throw InputError("weight array length does not match user count");
      for (std::size_t i = 0; i < j.size(); ++i) w[static_cast<Eigen::Index>(i)] = json_number(j[i], "weight");
    } else {
      for (std::size_t i = 0; i < users.size(); ++i) {
        if (!j.contains(users.user(i))) throw InputError("weight missing for user '" + users.user(i) + "'");
        w[static_cast<Eigen::Index>(i)] = json_number(j[users.user(i)], "weight");
      }
    }
    return WeightVector(std::move(w));
  }
  return parse_weights(text, users);
}

Json rates_to_json(const GroundSet& users, const Eigen::VectorXd& rates) {
  Json j = Json::object();
  for (std::size_t i = 0; i < users.size(); ++i) j[users.user(i)] = rates[static_cast<Eigen::Index>(i)];
  return j;
}

Eigen::VectorXd rates_from_json(const Json& j, const GroundSet& users) {
  const Json& map = (j.is_object() && j.contains("rates") && j["rates"].is_object()) ? j["rates"] : j;
  if (!map.is_object()) throw LoadError("rates must be a JSON object");
  Eigen::VectorXd r(static_cast<Eigen::Index>(users.size()));
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!map.contains(users.user(i))) throw LoadError("rate missing for user '" + users.user(i) + "'");
    r[static_cast<Eigen::Index>(i)] = json_number(map[users.user(i)], "rate");
  }
  for (const auto& [k, v] : map.items()) {
    if (!users.contains(k)) throw LoadError("rate given for unknown user '" + k + "'");
  }
  return r;
}

std::string rates_to_csv(const GroundSet& users, const Eigen::VectorXd& rates) {
  std::string out = join_ids(users.users()) + "\n";
  char buf[64];
  for (std::size_t i = 0; i < users.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", rates[static_cast<Eigen::Index>(i)]);
    if (i) out += ",";
    out += buf;
  }
  return out + "\n";
}

Eigen::VectorXd rates_from_csv(const std::string& text, const GroundSet& users) {
  std::istringstream is(text);
  std::string header;
  std::string row;
  if (!std::getline(is, header) || !std::getline(is, row)) {
    throw LoadError("rates CSV needs a header line and a value line");
  }
  const auto ids = split_commas(header);
  const auto values = split_commas(row);
  if (ids.size() != values.size()) throw LoadError("rates CSV header and row differ in length");
  if (ids.size() != users.size()) throw LoadError("rates CSV does not list every user");
  Eigen::VectorXd r(static_cast<Eigen::Index>(users.size()));
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!users.contains(ids[k])) throw LoadError("rates CSV names unknown user '" + ids[k] + "'");
    r[static_cast<Eigen::Index>(users.index(ids[k]))] = parse_number(values[k], "rate");
  }
  return r;
}

Eigen::VectorXd load_rates(const std::filesystem::path& path, const GroundSet& users) {
  const std::string text = read_file(path);
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    try {
      return rates_from_json(Json::parse(t), users);
    } catch (const Json::parse_error& e) {
      throw LoadError("'" + path.string() + "': " + e.what());
    }
  }
  return rates_from_csv(t, users);
}

Json subset_to_json(const GroundSet& users, const Subset& x) { return users.names(x); }

Json sfm_result_to_json(const GroundSet& users, const SfmResult& r) {
  Json j;
  j["min_value"] = r.min_value;
  j["minimal_minimizer"] = subset_to_json(users, r.minimal_minimizer);
  j["maximal_minimizer"] = subset_to_json(users, r.maximal_minimizer);
  j["solver"] = to_string(r.solver_used);
  j["oracle_evals"] = r.oracle_evals;
  j["ground_size"] = r.ground_size;
  return j;
}

namespace {

Json node_to_json(const GroundSet& users, const SplitNode& node) {
  Json j;
  j["users"] = subset_to_json(users, node.domain);
  j["lambda"] = node.lambda;
  j["sfm"] = sfm_result_to_json(users, node.sfm);
  j["leaf"] = node.is_leaf();
  if (!node.is_leaf()) {
    j["xhat"] = subset_to_json(users, node.children[0].domain);
    j["base_level"] = node.base_level;
    j["children"] = Json::array(
        {node_to_json(users, node.children[0]), node_to_json(users, node.children[1])});
  }
  return j;
}

}  // namespace

Json split_tree_to_json(const GroundSet& users, const SplitTree& tree) {
  Json j;
  j["rates"] = rates_to_json(users, tree.rates);
  j["weights"] = rates_to_json(users, tree.weights);
  j["metrics"] = metrics_to_json(recursion_metrics(tree));
  j["root"] = node_to_json(users, tree.root);
  Json path = Json::array();
  for (const auto& v : tree.path) path.push_back(rates_to_json(users, v));
  j["path"] = path;
  return j;
}

Json metrics_to_json(const RecursionMetrics& m) {
  Json j;
  j["sum_size"] = m.sum_size;
  j["max_size"] = m.max_size;
  j["node_count"] = m.node_count;
  j["depth"] = m.depth;
  return j;
}

Json decomposition_to_json(const GroundSet& users, const Decomposition& d) {
  Json j;
  j["critical_values"] = d.critical_values;
  Json chain = Json::array();
  for (const auto& s : d.chain) chain.push_back(subset_to_json(users, s));
  j["chain"] = chain;
  return j;
}

Json membership_to_json(const GroundSet& users, const MembershipReport& m) {
  Json j;
  j["in_region"] = m.in_region;
  j["worst_constraint"] = subset_to_json(users, m.worst_constraint);
  j["slack"] = m.slack;
  j["worst_polyhedral"] = subset_to_json(users, m.worst_polyhedral);
  j["polyhedral_slack"] = m.polyhedral_slack;
  j["sum_deviation"] = m.sum_deviation;
  return j;
}

Json fairness_report_to_json(const GroundSet& users, const FairnessReport& r) {
  Json j;
  j["total_entropy"] = r.total_entropy;
  Json methods = Json::array();
  for (const auto& m : r.methods) {
    Json e;
    e["method"] = m.method;
    e["rates"] = rates_to_json(users, m.rates);
    e["max_ratio"] = m.max_ratio;
    e["min_ratio"] = m.min_ratio;
    e["max_rate"] = m.max_rate;
    e["lifetime"] = m.lifetime;
    e["sum_rate"] = m.sum_rate;
    e["in_region"] = m.in_region;
    e["min_slack"] = std::isnan(m.min_slack) ? Json(nullptr) : Json(m.min_slack);
    methods.push_back(e);
  }
  j["methods"] = methods;
  return j;
}

}  // namespace swfair
