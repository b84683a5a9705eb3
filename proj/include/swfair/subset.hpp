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

#ifndef SWFAIR_SUBSET_HPP_
#define SWFAIR_SUBSET_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace swfair {

/// A subset of a universe {0, ..., n-1}, stored as a packed bitmask.
///
/// A universe of n <= 64 fits in a single word; larger universes use one word
/// per 64 elements. All binary operations require operands over the same
/// universe size.
class Subset {
 public:
  Subset() = default;
  explicit Subset(std::size_t universe);
  Subset(std::size_t universe, std::initializer_list<std::size_t> members);
  Subset(std::size_t universe, std::span<const std::size_t> members);

  static Subset full(std::size_t universe);
  /// Builds a subset from the low bits of `mask` (universe <= 64).
  static Subset from_mask(std::size_t universe, std::uint64_t mask);

  std::size_t universe() const { return universe_; }
  std::size_t size() const;
  bool empty() const;

  bool contains(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void insert(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void erase(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  bool is_subset_of(const Subset& other) const;
  bool intersects(const Subset& other) const;

  Subset& operator|=(const Subset& other);
  Subset& operator&=(const Subset& other);
  /// Set difference.
  Subset& operator-=(const Subset& other);

  friend Subset operator|(Subset a, const Subset& b) { return a |= b; }
  friend Subset operator&(Subset a, const Subset& b) { return a &= b; }
  friend Subset operator-(Subset a, const Subset& b) { return a -= b; }
  friend bool operator==(const Subset&, const Subset&) = default;

  /// Members in increasing order.
  std::vector<std::size_t> members() const;

  /// Low word; only meaningful for universe <= 64.
  std::uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

  /// Calls fn(i) for each member in increasing order.
  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        fn(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  std::span<const std::uint64_t> words() const { return words_; }

  /// "{0,2,5}" style rendering of member indices.
  std::string to_string() const;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Enumerates subsets of `domain` by the bits of a local mask: bit k selects
/// the k-th member of `domain`. Used by the exhaustive routines.
class SubsetEnumerator {
 public:
  explicit SubsetEnumerator(const Subset& domain);

  std::size_t domain_size() const { return members_.size(); }
  std::uint64_t count() const { return std::uint64_t{1} << members_.size(); }
  Subset at(std::uint64_t local_mask) const;
  const std::vector<std::size_t>& members() const { return members_; }

 private:
  std::size_t universe_;
  std::vector<std::size_t> members_;
};

}  // namespace swfair

#endif  // SWFAIR_SUBSET_HPP_
