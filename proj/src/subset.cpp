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

#include "swfair/subset.hpp"

#include <cassert>

#include "swfair/errors.hpp"

namespace swfair {

namespace {

std::size_t word_count(std::size_t universe) { return (universe + 63) / 64; }

}  // namespace

Subset::Subset(std::size_t universe)
    : universe_(universe), words_(word_count(universe), 0) {}

Subset::Subset(std::size_t universe, std::initializer_list<std::size_t> members)
    : Subset(universe, std::span<const std::size_t>(members.begin(), members.size())) {}

Subset::Subset(std::size_t universe, std::span<const std::size_t> members)
    : Subset(universe) {
  for (std::size_t i : members) {
    if (i >= universe) {
      throw InvalidSubsetError("element " + std::to_string(i) +
                               " outside universe of size " + std::to_string(universe));
    }
    insert(i);
  }
}

Subset Subset::full(std::size_t universe) {
  Subset s(universe);
  for (std::size_t w = 0; w < s.words_.size(); ++w) s.words_[w] = ~std::uint64_t{0};
  if (universe % 64 != 0) {
    s.words_.back() = (std::uint64_t{1} << (universe % 64)) - 1;
  }
  return s;
}

Subset Subset::from_mask(std::size_t universe, std::uint64_t mask) {
  assert(universe <= 64);
  Subset s(universe);
  if (!s.words_.empty()) {
    s.words_[0] = universe == 64 ? mask : mask & ((std::uint64_t{1} << universe) - 1);
  }
  return s;
}

std::size_t Subset::size() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool Subset::empty() const {
  for (std::uint64_t w : words_) {
    if (w != 0) return false;
  }
  return true;
}

bool Subset::is_subset_of(const Subset& other) const {
  assert(universe_ == other.universe_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

bool Subset::intersects(const Subset& other) const {
  assert(universe_ == other.universe_);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & other.words_[w]) != 0) return true;
  }
  return false;
}

Subset& Subset::operator|=(const Subset& other) {
  assert(universe_ == other.universe_);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

Subset& Subset::operator&=(const Subset& other) {
  assert(universe_ == other.universe_);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

Subset& Subset::operator-=(const Subset& other) {
  assert(universe_ == other.universe_);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
  return *this;
}

std::vector<std::size_t> Subset::members() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

std::string Subset::to_string() const {
  std::string out = "{";
  bool first = true;
  for_each([&](std::size_t i) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  });
  return out + "}";
}

SubsetEnumerator::SubsetEnumerator(const Subset& domain)
    : universe_(domain.universe()), members_(domain.members()) {
  assert(members_.size() < 64);
}

Subset SubsetEnumerator::at(std::uint64_t local_mask) const {
  Subset s(universe_);
  while (local_mask != 0) {
    s.insert(members_[static_cast<std::size_t>(std::countr_zero(local_mask))]);
    local_mask &= local_mask - 1;
  }
  return s;
}

}  // namespace swfair
