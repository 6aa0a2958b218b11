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

#include "qproof/bits.hpp"

#include <algorithm>
#include <bit>
#include <utility>

#include "qproof/errors.hpp"

namespace qproof {
namespace {

constexpr std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

std::uint64_t tail_mask(std::size_t n) {
  const std::size_t used = n & 63;
  return used == 0 ? ~std::uint64_t{0} : ~std::uint64_t{0} << (64 - used);
}

void require_index(const BitString& s, std::size_t i) {
  if (i >= s.size()) {
    throw ContractViolation("bit index " + std::to_string(i) + " out of range for length " +
                            std::to_string(s.size()));
  }
}

}  // namespace

BitString::BitString(std::size_t n) : n_(n), words_(word_count(n), 0) {}

BitString BitString::from_string(std::string_view text) {
  BitString s(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      s.set(i, true);
    } else if (text[i] != '0') {
      throw ContractViolation("bit string may only contain '0' and '1'");
    }
  }
  return s;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t n) {
  if (n > 64) throw ContractViolation("from_uint supports at most 64 bits");
  if (n < 64 && (value >> n) != 0) throw ContractViolation("value does not fit in n bits");
  BitString s(n);
  if (n > 0) s.words_[0] = value << (64 - n);
  return s;
}

BitString BitString::random(std::size_t n, Rng& rng) {
  BitString s(n);
  for (auto& w : s.words_) w = rng.next();
  if (!s.words_.empty()) s.words_.back() &= tail_mask(n);
  return s;
}

BitString BitString::unit(std::size_t n, std::size_t i) {
  BitString s(n);
  s.set(i, true);
  return s;
}

bool BitString::get(std::size_t i) const {
  require_index(*this, i);
  return (*this)[i];
}

void BitString::set(std::size_t i, bool value) {
  require_index(*this, i);
  const std::uint64_t mask = std::uint64_t{1} << (63 - (i & 63));
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

void BitString::flip(std::size_t i) {
  require_index(*this, i);
  words_[i >> 6] ^= std::uint64_t{1} << (63 - (i & 63));
}

bool BitString::is_zero() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::size_t BitString::popcount() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t BitString::leading_zeros() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countl_zero(words_[w]));
  }
  return n_;
}

std::uint64_t BitString::to_uint() const {
  if (n_ > 64) throw ContractViolation("to_uint supports at most 64 bits");
  if (n_ == 0) return 0;
  return words_[0] >> (64 - n_);
}

std::string BitString::to_string() const {
  std::string out(n_, '0');
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.n_ != n_) throw ContractViolation("xor of bit strings with different lengths");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::strong_ordering operator<=>(const BitString& a, const BitString& b) noexcept {
  if (a.n_ != b.n_) return a.n_ <=> b.n_;
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    if (a.words_[w] != b.words_[w]) return a.words_[w] <=> b.words_[w];
  }
  return std::strong_ordering::equal;
}

bool inner_product(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) {
    throw ContractViolation("inner product of bit strings with lengths " +
                            std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  const auto aw = a.words();
  const auto bw = b.words();
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < aw.size(); ++w) acc ^= aw[w] & bw[w];
  return (std::popcount(acc) & 1) != 0;
}

bool HashQuerySet::has_round_prefix(const BitString& h, std::size_t j) {
  return j >= 1 && j <= h.size() && h.leading_zeros() == j - 1;
}

std::size_t gf2_rank(std::vector<BitString> rows) {
  std::size_t rank = 0;
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    auto pivot = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                              [col](const BitString& r) { return r[col]; });
    if (pivot == rows.end()) continue;
    std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(rank), pivot);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r][col]) rows[r] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

HashQuerySet::HashQuerySet(std::size_t n, std::vector<BitString> queries)
    : n_(n), queries_(std::move(queries)) {
  if (n_ == 0) throw ContractViolation("hash query set needs n >= 1");
  if (queries_.size() != n_ - 1) {
    throw ContractViolation("expected " + std::to_string(n_ - 1) + " hash queries, got " +
                            std::to_string(queries_.size()));
  }
  for (std::size_t j = 1; j <= queries_.size(); ++j) {
    const BitString& h = queries_[j - 1];
    if (h.size() != n_ || !has_round_prefix(h, j)) {
      throw ContractViolation("hash query " + std::to_string(j) + " lacks the 0^{j-1}1 prefix");
    }
  }
  // Distinct pivots already imply this; kept as an explicit check.
  if (gf2_rank(queries_) != queries_.size()) {
    throw ContractViolation("hash queries are linearly dependent");
  }
}

BitString sample_hash_query(std::size_t j, std::size_t n, Rng& rng) {
  if (n < 2 || j < 1 || j > n - 1) {
    throw ContractViolation("hash round " + std::to_string(j) + " out of range for n = " +
                            std::to_string(n));
  }
  BitString h = BitString::random(n, rng);
  for (std::size_t i = 0; i + 1 < j; ++i) h.set(i, false);
  h.set(j - 1, true);
  return h;
}

HashQuerySet sample_hash_queries(std::size_t n, Rng& rng) {
  std::vector<BitString> queries;
  queries.reserve(n > 0 ? n - 1 : 0);
  for (std::size_t j = 1; j < n; ++j) queries.push_back(sample_hash_query(j, n, rng));
  return HashQuerySet(n, std::move(queries));
}

SolutionPair solve_two_solutions(const HashQuerySet& queries,
                                 std::span<const std::uint8_t> answers) {
  const std::size_t n = queries.n();
  if (answers.size() != queries.rounds()) {
    throw ContractViolation("answer count does not match the number of hash rounds");
  }
  for (auto c : answers) {
    if (c > 1) throw ContractViolation("hash answers must be bits");
  }

  auto solve = [&](bool last) {
    BitString y(n);
    y.set(n - 1, last);
    // Row j has its pivot at index j−1 and only later coordinates besides it,
    // so once y_{j+1..n} are fixed the row determines y_j.
    for (std::size_t j = n - 1; j >= 1; --j) {
      const BitString& h = queries.query(j);
      bool rest = answers[j - 1] != 0;
      for (std::size_t k = j; k < n; ++k) rest ^= h[k] && y[k];
      y.set(j - 1, rest);
    }
    return y;
  };

  BitString a = solve(false);
  BitString b = solve(true);
  if (b < a) std::swap(a, b);
  return SolutionPair{std::move(a), std::move(b)};
}

}  // namespace qproof
