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

#include "qproof/tdp.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

#include <boost/integer/mod_inverse.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "qproof/errors.hpp"

namespace qproof {
namespace mp = boost::multiprecision;

namespace {

constexpr std::uint64_t kPublicExponent = 65537;
constexpr int kMillerRabinRounds = 25;
constexpr int kGenerationAttempts = 10000;

std::size_t floor_log2(const BigInt& v) { return static_cast<std::size_t>(mp::msb(v)); }

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool fits_u64(const BigInt& v) { return v >= 0 && v <= std::numeric_limits<std::uint64_t>::max(); }

BigInt to_bigint(const BitString& s) {
  BigInt v = 0;
  for (std::uint64_t w : s.words()) v = (v << 64) | w;
  const std::size_t pad = s.words().size() * 64 - s.size();
  return v >> pad;
}

BitString from_bigint(const BigInt& v, std::size_t n) {
  if (n <= 64) return BitString::from_uint(static_cast<std::uint64_t>(v), n);
  BitString s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (mp::bit_test(v, static_cast<unsigned>(n - 1 - i))) s.set(i, true);
  }
  return s;
}

// Applies x -> x^exp mod N until the value lands in [0, 2^n).
BitString cycle_walk(const BitString& x, std::size_t n, const BigInt& modulus,
                     const BigInt& exponent, std::uint64_t modulus64, std::uint64_t exponent64) {
  if (modulus64 != 0) {
    const std::uint64_t bound = n == 64 ? 0 : std::uint64_t{1} << n;
    std::uint64_t v = x.to_uint();
    do {
      v = powmod(v, exponent64, modulus64);
    } while (n < 64 && v >= bound);
    return BitString::from_uint(v, n);
  }
  const BigInt bound = BigInt(1) << n;
  BigInt v = to_bigint(x);
  do {
    v = mp::powm(v, exponent, modulus);
  } while (v >= bound);
  return from_bigint(v, n);
}

void require_length(std::size_t expected, const BitString& s) {
  if (s.size() != expected) {
    throw ContractViolation("permutation input has length " + std::to_string(s.size()) +
                            ", key expects " + std::to_string(expected));
  }
}

bool is_permutation_table(const std::vector<std::uint32_t>& table) {
  std::vector<bool> seen(table.size(), false);
  for (auto v : table) {
    if (v >= table.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::vector<std::uint32_t> invert_table(const std::vector<std::uint32_t>& forward) {
  std::vector<std::uint32_t> inverse(forward.size());
  for (std::uint32_t x = 0; x < forward.size(); ++x) inverse[forward[x]] = x;
  return inverse;
}

std::size_t table_bits(std::size_t size) {
  if (size < 2 || (size & (size - 1)) != 0) {
    throw ConfigurationError("table size must be a power of two >= 2");
  }
  return static_cast<std::size_t>(std::countr_zero(size));
}

BigInt random_bits(std::size_t bits, Rng& rng) {
  BigInt v = 0;
  for (std::size_t produced = 0; produced < bits; produced += 64) v = (v << 64) | rng.next();
  return v & ((BigInt(1) << bits) - 1);
}

BigInt random_prime(std::size_t bits, Rng& rng) {
  std::mt19937_64 witness_rng(rng.next());
  for (int attempt = 0; attempt < kGenerationAttempts * 10; ++attempt) {
    BigInt candidate = random_bits(bits, rng);
    mp::bit_set(candidate, static_cast<unsigned>(bits - 1));
    mp::bit_set(candidate, 0);
    if (mp::miller_rabin_test(candidate, kMillerRabinRounds, witness_rng)) return candidate;
  }
  throw ConfigurationError("failed to find a " + std::to_string(bits) + "-bit prime");
}

std::vector<BigInt> trial_factor(BigInt n) {
  std::vector<BigInt> factors;
  for (std::uint64_t p = 2; BigInt(p) * p <= n; ++p) {
    while (n % p == 0) {
      factors.emplace_back(p);
      n /= p;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

std::string big_to_string(const BigInt& v) { return v.str(); }

BigInt big_from_json(const nlohmann::json& j, const char* field) {
  const auto& v = j.at(field);
  if (!v.is_string()) throw ConfigurationError(std::string(field) + " must be a decimal string");
  const std::string text = v.get<std::string>();
  if (text.empty() || text.size() > 2048 ||
      !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      (text.size() > 1 && text[0] == '0')) {
    throw ConfigurationError(std::string(field) + " is not a canonical decimal integer");
  }
  return BigInt(text);
}

TdpKeyPair modular_pair(const BigInt& modulus, const BigInt& exponent,
                        const BigInt& inverse_exponent, std::size_t bits) {
  const std::size_t n = floor_log2(modulus);
  return TdpKeyPair{TdpKey(ModularKey{n, modulus, exponent}),
                    TdpTrapdoor(ModularTrapdoor{n, modulus, inverse_exponent}), bits};
}

}  // namespace

BigInt carmichael_squarefree(const std::vector<BigInt>& primes) {
  BigInt result = 1;
  for (const auto& p : primes) {
    const BigInt phi = p - 1;
    result = result / mp::gcd(result, phi) * phi;
  }
  return result;
}

TdpKey::TdpKey(Variant v) : v_(std::move(v)) {
  if (const auto* mock = std::get_if<MockTableKey>(&v_)) {
    if (mock->n == 0 || mock->forward.size() != (std::size_t{1} << mock->n) ||
        !is_permutation_table(mock->forward)) {
      throw ConfigurationError("mock key table is not a permutation of {0,1}^n");
    }
    n_ = mock->n;
  } else {
    const auto& mod = std::get<ModularKey>(v_);
    if (mod.modulus < 2 || mod.exponent < 1 || mod.n != floor_log2(mod.modulus)) {
      throw ConfigurationError("modular key must satisfy n = floor(log2 N)");
    }
    n_ = mod.n;
    if (fits_u64(mod.modulus) && fits_u64(mod.exponent)) {
      modulus64_ = static_cast<std::uint64_t>(mod.modulus);
      exponent64_ = static_cast<std::uint64_t>(mod.exponent);
    }
  }
}

nlohmann::json TdpKey::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  if (const auto* mock = std::get_if<MockTableKey>(&v_)) {
    j["variant"] = "mock";
    j["payload"] = {{"table", mock->forward}};
  } else {
    const auto& mod = std::get<ModularKey>(v_);
    j["variant"] = "modular";
    j["payload"] = {{"modulus", big_to_string(mod.modulus)},
                    {"exponent", big_to_string(mod.exponent)}};
  }
  return j;
}

TdpKey TdpKey::from_json(const nlohmann::json& j) {
  try {
    const auto variant = j.at("variant").get<std::string>();
    const auto n = j.at("n").get<std::size_t>();
    const auto& payload = j.at("payload");
    if (variant == "mock") {
      return TdpKey(MockTableKey{n, payload.at("table").get<std::vector<std::uint32_t>>()});
    }
    if (variant == "modular") {
      return TdpKey(
          ModularKey{n, big_from_json(payload, "modulus"), big_from_json(payload, "exponent")});
    }
    throw ConfigurationError("unknown key variant '" + variant + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("malformed key record: ") + e.what());
  }
}

TdpTrapdoor::TdpTrapdoor(Variant v) : v_(std::move(v)) {
  if (const auto* mock = std::get_if<MockTableTrapdoor>(&v_)) {
    if (mock->n == 0 || mock->inverse.size() != (std::size_t{1} << mock->n) ||
        !is_permutation_table(mock->inverse)) {
      throw ConfigurationError("mock trapdoor table is not a permutation of {0,1}^n");
    }
    n_ = mock->n;
  } else {
    const auto& mod = std::get<ModularTrapdoor>(v_);
    if (mod.modulus < 2 || mod.inverse_exponent < 1 || mod.n != floor_log2(mod.modulus)) {
      throw ConfigurationError("modular trapdoor must satisfy n = floor(log2 N)");
    }
    n_ = mod.n;
    if (fits_u64(mod.modulus) && fits_u64(mod.inverse_exponent)) {
      modulus64_ = static_cast<std::uint64_t>(mod.modulus);
      exponent64_ = static_cast<std::uint64_t>(mod.inverse_exponent);
    }
  }
}

nlohmann::json TdpTrapdoor::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  if (const auto* mock = std::get_if<MockTableTrapdoor>(&v_)) {
    j["variant"] = "mock";
    j["payload"] = {{"inverse", mock->inverse}};
  } else {
    const auto& mod = std::get<ModularTrapdoor>(v_);
    j["variant"] = "modular";
    j["payload"] = {{"modulus", big_to_string(mod.modulus)},
                    {"inverse_exponent", big_to_string(mod.inverse_exponent)}};
  }
  return j;
}

TdpTrapdoor TdpTrapdoor::from_json(const nlohmann::json& j) {
  try {
    const auto variant = j.at("variant").get<std::string>();
    const auto n = j.at("n").get<std::size_t>();
    const auto& payload = j.at("payload");
    if (variant == "mock") {
      return TdpTrapdoor(
          MockTableTrapdoor{n, payload.at("inverse").get<std::vector<std::uint32_t>>()});
    }
    if (variant == "modular") {
      return TdpTrapdoor(ModularTrapdoor{n, big_from_json(payload, "modulus"),
                                         big_from_json(payload, "inverse_exponent")});
    }
    throw ConfigurationError("unknown trapdoor variant '" + variant + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("malformed trapdoor record: ") + e.what());
  }
}

TdpKeyPair mock_from_table(std::vector<std::uint32_t> forward) {
  const std::size_t n = table_bits(forward.size());
  if (!is_permutation_table(forward)) throw ConfigurationError("table is not a permutation");
  auto inverse = invert_table(forward);
  return TdpKeyPair{TdpKey(MockTableKey{n, std::move(forward)}),
                    TdpTrapdoor(MockTableTrapdoor{n, std::move(inverse)}), n};
}

TdpKeyPair gen(const TdpConfig& config, Rng& rng) {
  if (const auto* mock = std::get_if<MockTableConfig>(&config)) {
    if (mock->n < 1 || mock->n > mock->exhaustive_bound || mock->n > 31) {
      throw ConfigurationError("mock table size n = " + std::to_string(mock->n) +
                               " outside [1, " + std::to_string(mock->exhaustive_bound) + "]");
    }
    std::vector<std::uint32_t> table(std::size_t{1} << mock->n);
    std::iota(table.begin(), table.end(), 0u);
    if (!mock->identity) {
      // Fisher-Yates with the engine-independent bounded draw.
      for (std::size_t i = table.size() - 1; i > 0; --i) {
        std::swap(table[i], table[rng.below(i + 1)]);
      }
    }
    return mock_from_table(std::move(table));
  }

  if (const auto* mod = std::get_if<ModularConfig>(&config)) {
    const std::size_t bits = mod->modulus_bits;
    if (bits < 8 || bits > 4096) {
      throw ConfigurationError("modulus bit length must lie in [8, 4096], got " +
                               std::to_string(bits));
    }
    const BigInt e = kPublicExponent;
    for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
      const BigInt p = random_prime((bits + 1) / 2, rng);
      const BigInt q = random_prime(bits / 2, rng);
      if (p == q) continue;
      const BigInt modulus = p * q;
      if (floor_log2(modulus) + 1 != bits) continue;
      const BigInt lambda = carmichael_squarefree({p, q});
      if (mp::gcd(e, lambda) != 1) continue;
      const BigInt d = boost::integer::mod_inverse(e, lambda);
      return modular_pair(modulus, e, d, bits);
    }
    throw ConfigurationError("could not generate a " + std::to_string(bits) + "-bit modulus");
  }

  const auto& exp = std::get<ExplicitModulusConfig>(config);
  if (exp.modulus < 2 || exp.modulus >= (BigInt(1) << 48)) {
    throw ConfigurationError("explicit modulus must lie in [2, 2^48)");
  }
  if (exp.exponent < 1) throw ConfigurationError("exponent must be positive");
  const auto factors = trial_factor(exp.modulus);
  for (std::size_t i = 1; i < factors.size(); ++i) {
    if (factors[i] == factors[i - 1]) {
      throw ConfigurationError("modulus must be squarefree for x^e to permute Z_N");
    }
  }
  const BigInt lambda = carmichael_squarefree(factors);
  if (mp::gcd(exp.exponent, lambda) != 1) {
    throw ConfigurationError("exponent shares a factor with lambda(N) = " + lambda.str());
  }
  const BigInt d = lambda == 1 ? BigInt(1) : boost::integer::mod_inverse(BigInt(exp.exponent % lambda), lambda);
  return modular_pair(exp.modulus, exp.exponent, d, floor_log2(exp.modulus) + 1);
}

BitString eval(const TdpKey& key, const BitString& x) {
  require_length(key.n(), x);
  if (const auto* mock = std::get_if<MockTableKey>(&key.v_)) {
    return BitString::from_uint(mock->forward[x.to_uint()], mock->n);
  }
  const auto& mod = std::get<ModularKey>(key.v_);
  return cycle_walk(x, mod.n, mod.modulus, mod.exponent, key.modulus64_, key.exponent64_);
}

BitString invert(const TdpTrapdoor& td, const BitString& y) {
  require_length(td.n(), y);
  if (const auto* mock = std::get_if<MockTableTrapdoor>(&td.v_)) {
    return BitString::from_uint(mock->inverse[y.to_uint()], mock->n);
  }
  const auto& mod = std::get<ModularTrapdoor>(td.v_);
  return cycle_walk(y, mod.n, mod.modulus, mod.inverse_exponent, td.modulus64_, td.exponent64_);
}

}  // namespace qproof
