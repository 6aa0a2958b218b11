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

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "qproof/bits.hpp"
#include "qproof/rng.hpp"

namespace qproof {

using BigInt = boost::multiprecision::cpp_int;

// Full-domain trapdoor permutations on {0,1}^n.
//
// Two families are provided. MockTable is an explicit lookup table (its
// inverse table is the trapdoor) for exhaustive testing at small n.
// CycleWalkModular restricts x -> x^e mod N to [0, 2^n) with n = floor(log2 N)
// by iterating the exponentiation until the value falls back into range.

/// Public half of a MockTable instance. `forward[x]` is the image of x.
struct MockTableKey {
  std::size_t n = 0;
  std::vector<std::uint32_t> forward;
};

struct MockTableTrapdoor {
  std::size_t n = 0;
  std::vector<std::uint32_t> inverse;
};

struct ModularKey {
  std::size_t n = 0;
  BigInt modulus;
  BigInt exponent;
};

struct ModularTrapdoor {
  std::size_t n = 0;
  BigInt modulus;
  BigInt inverse_exponent;
};

/// Public evaluation key k. Immutable once generated.
class TdpKey {
 public:
  using Variant = std::variant<MockTableKey, ModularKey>;

  explicit TdpKey(Variant v);

  std::size_t n() const noexcept { return n_; }
  const Variant& variant() const noexcept { return v_; }
  bool is_mock() const noexcept { return std::holds_alternative<MockTableKey>(v_); }

  /// Canonical wire form: {"n":..,"payload":{..},"variant":"mock"|"modular"},
  /// big integers as decimal strings.
  nlohmann::json to_json() const;
  static TdpKey from_json(const nlohmann::json& j);

  friend bool operator==(const TdpKey& a, const TdpKey& b) { return a.to_json() == b.to_json(); }

 private:
  friend BitString eval(const TdpKey& key, const BitString& x);

  Variant v_;
  std::size_t n_ = 0;
  // Word-sized copies of the modular parameters when N < 2^64.
  std::uint64_t modulus64_ = 0;
  std::uint64_t exponent64_ = 0;
};

/// Secret inversion data td.
class TdpTrapdoor {
 public:
  using Variant = std::variant<MockTableTrapdoor, ModularTrapdoor>;

  explicit TdpTrapdoor(Variant v);

  std::size_t n() const noexcept { return n_; }
  const Variant& variant() const noexcept { return v_; }

  nlohmann::json to_json() const;
  static TdpTrapdoor from_json(const nlohmann::json& j);

 private:
  friend BitString invert(const TdpTrapdoor& td, const BitString& y);

  Variant v_;
  std::size_t n_ = 0;
  std::uint64_t modulus64_ = 0;
  std::uint64_t exponent64_ = 0;
};

struct TdpKeyPair {
  TdpKey key;
  TdpTrapdoor trapdoor;
  /// Generation size parameter (modulus bits, or n for tables). Reported
  /// alongside n, which is derived from the key.
  std::size_t size_parameter = 0;
};

inline constexpr std::size_t kDefaultExhaustiveBound = 20;

struct MockTableConfig {
  std::size_t n = 8;
  bool identity = false;
  std::size_t exhaustive_bound = kDefaultExhaustiveBound;
};

/// Random squarefree N = p·q with exactly `modulus_bits` bits and e = 65537.
struct ModularConfig {
  std::size_t modulus_bits = 33;
};

/// Caller-supplied modulus and exponent. N is factored by trial division, so
/// it must stay below 2^48.
struct ExplicitModulusConfig {
  BigInt modulus;
  BigInt exponent;
};

using TdpConfig = std::variant<MockTableConfig, ModularConfig, ExplicitModulusConfig>;

TdpKeyPair gen(const TdpConfig& config, Rng& rng);

/// Builds a table instance from an explicit forward table of size 2^n.
TdpKeyPair mock_from_table(std::vector<std::uint32_t> forward);

BitString eval(const TdpKey& key, const BitString& x);
BitString invert(const TdpTrapdoor& td, const BitString& y);

/// Carmichael function of a squarefree modulus given its prime factors.
BigInt carmichael_squarefree(const std::vector<BigInt>& primes);

}  // namespace qproof
