// Copyright 2026 The qproof Authors
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

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "qproof/rng.hpp"

namespace qproof {

/// A fixed-length vector over GF(2).
///
/// Index 0 is the leftmost bit (position 1 in the usual 1-based notation) and
/// is also the most significant bit when the string is read as an integer, so
/// lexicographic order coincides with numeric order. Bits are packed
/// MSB-first into 64-bit words; unused tail bits are always zero.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n);

  /// Parses ASCII '0'/'1', leftmost character first.
  static BitString from_string(std::string_view text);
  /// Big-endian: the low bit of `value` becomes the rightmost bit. n <= 64.
  static BitString from_uint(std::uint64_t value, std::size_t n);
  static BitString random(std::size_t n, Rng& rng);
  /// The string e_i with a single 1 at index i.
  static BitString unit(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return n_; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i >> 6] >> (63 - (i & 63))) & 1u;
  }
  bool get(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  bool is_zero() const noexcept;
  std::size_t popcount() const noexcept;
  /// Index of the leftmost 1, or size() when the string is zero.
  std::size_t leading_zeros() const noexcept;

  std::uint64_t to_uint() const;
  std::string to_string() const;

  std::span<const std::uint64_t> words() const noexcept { return {words_.data(), words_.size()}; }

  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }

  friend bool operator==(const BitString& a, const BitString& b) noexcept {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }
  /// Shorter strings order first; equal lengths order lexicographically.
  friend std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept;

 private:
  std::size_t n_ = 0;
  boost::container::small_vector<std::uint64_t, 2> words_;
};

/// ⊕_j a_j b_j. Throws ContractViolation on length mismatch.
bool inner_product(const BitString& a, const BitString& b);

/// The n−1 structured interactive-hashing queries. Query j (1-based) has j−1
/// leading zeros followed by a 1.
class HashQuerySet {
 public:
  /// Validates the prefix structure and linear independence.
  HashQuerySet(std::size_t n, std::vector<BitString> queries);

  std::size_t n() const noexcept { return n_; }
  std::size_t rounds() const noexcept { return queries_.size(); }
  /// 1-based round index.
  const BitString& query(std::size_t j) const { return queries_.at(j - 1); }
  const std::vector<BitString>& queries() const noexcept { return queries_; }

  static bool has_round_prefix(const BitString& h, std::size_t j);

 private:
  std::size_t n_;
  std::vector<BitString> queries_;
};

/// Uniform over 0^{j−1} 1 {0,1}^{n−j}; j is 1-based and must lie in [1, n−1].
BitString sample_hash_query(std::size_t j, std::size_t n, Rng& rng);
HashQuerySet sample_hash_queries(std::size_t n, Rng& rng);

/// The two strings satisfying every h_j·y = c_j, with y0 < y1.
struct SolutionPair {
  BitString y0;
  BitString y1;

  friend bool operator==(const SolutionPair&, const SolutionPair&) = default;
};

/// Back-substitutes the triangular system once for each value of the free
/// last coordinate. `answers` holds n−1 values in {0,1}.
SolutionPair solve_two_solutions(const HashQuerySet& queries,
                                 std::span<const std::uint8_t> answers);

/// Rank of a list of equal-length vectors over GF(2).
std::size_t gf2_rank(std::vector<BitString> rows);

}  // namespace qproof
