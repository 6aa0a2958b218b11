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

#include <gtest/gtest.h>

#include <set>

#include "qproof/errors.hpp"
#include "qproof/tdp.hpp"

using namespace qproof;

namespace {

BitString B(const char* s) { return BitString::from_string(s); }

BigInt powmod(BigInt b, BigInt e, const BigInt& m) {
  BigInt r = 1;
  b %= m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

}  // namespace

TEST(MockTable, identity_table) {
  Rng rng(1);
  const TdpKeyPair kp = gen(MockTableConfig{3, true}, rng);
  EXPECT_EQ(kp.key.n(), 3u);
  EXPECT_EQ(eval(kp.key, B("101")), B("101"));
  EXPECT_EQ(invert(kp.trapdoor, B("011")), B("011"));
}

TEST(MockTable, explicit_table) {
  const TdpKeyPair kp = mock_from_table({1, 0});
  EXPECT_EQ(eval(kp.key, B("0")), B("1"));
  EXPECT_EQ(invert(kp.trapdoor, B("1")), B("0"));
  EXPECT_THROW(mock_from_table({0, 0}), ConfigurationError);
  EXPECT_THROW(mock_from_table({0, 1, 2}), ConfigurationError);
}

TEST(MockTable, random_table_is_a_permutation) {
  Rng rng(2);
  const TdpKeyPair kp = gen(MockTableConfig{8}, rng);
  const auto& table = std::get<MockTableKey>(kp.key.variant()).forward;
  ASSERT_EQ(table.size(), 256u);
  EXPECT_EQ(std::set<std::uint32_t>(table.begin(), table.end()).size(), 256u);
}

TEST(MockTable, round_trip_exhaustive_up_to_12) {
  Rng rng(3);
  for (std::size_t n = 1; n <= 12; ++n) {
    const TdpKeyPair kp = gen(MockTableConfig{n}, rng);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      const BitString xs = BitString::from_uint(x, n);
      ASSERT_EQ(invert(kp.trapdoor, eval(kp.key, xs)), xs);
    }
  }
}

TEST(MockTable, size_bounds) {
  Rng rng(4);
  EXPECT_THROW(gen(MockTableConfig{0}, rng), ConfigurationError);
  EXPECT_THROW(gen(MockTableConfig{21}, rng), ConfigurationError);
  EXPECT_THROW(gen(MockTableConfig{12, false, 10}, rng), ConfigurationError);
}

TEST(CycleWalk, n21_example) {
  Rng rng(5);
  const TdpKeyPair kp = gen(ExplicitModulusConfig{21, 5}, rng);
  EXPECT_EQ(kp.key.n(), 4u);
  EXPECT_EQ(eval(kp.key, B("0010")), B("1011"));
  EXPECT_EQ(invert(kp.trapdoor, B("1011")), B("0010"));
  const auto& td = std::get<ModularTrapdoor>(kp.trapdoor.variant());
  EXPECT_EQ(td.inverse_exponent, 5);
}

TEST(CycleWalk, n21_is_a_bijection_matching_an_independent_walk) {
  Rng rng(6);
  const TdpKeyPair kp = gen(ExplicitModulusConfig{21, 5}, rng);
  std::set<std::uint64_t> image;
  for (std::uint64_t x = 0; x < 16; ++x) {
    BigInt v = x;
    do {
      v = powmod(v, 5, 21);
    } while (v >= 16);
    const BitString y = eval(kp.key, BitString::from_uint(x, 4));
    EXPECT_EQ(BigInt(y.to_uint()), v);
    image.insert(y.to_uint());
  }
  EXPECT_EQ(image.size(), 16u);
}

TEST(CycleWalk, rejects_bad_parameters) {
  Rng rng(7);
  EXPECT_THROW(gen(ExplicitModulusConfig{21, 3}, rng), ConfigurationError);  // gcd(3, 6) = 3
  EXPECT_THROW(gen(ExplicitModulusConfig{18, 5}, rng), ConfigurationError);  // not squarefree
  EXPECT_THROW(gen(ExplicitModulusConfig{1, 5}, rng), ConfigurationError);
  EXPECT_THROW(gen(ModularConfig{7}, rng), ConfigurationError);
  EXPECT_THROW(gen(ModularConfig{5000}, rng), ConfigurationError);
}

TEST(CycleWalk, carmichael) {
  EXPECT_EQ(carmichael_squarefree({3, 7}), 6);
  EXPECT_EQ(carmichael_squarefree({5, 7, 11}), 60);
}

TEST(CycleWalk, generated_modulus_sizes) {
  Rng rng(8);
  for (std::size_t bits : {8u, 9u, 16u, 33u, 64u, 65u, 128u}) {
    const TdpKeyPair kp = gen(ModularConfig{bits}, rng);
    const auto& k = std::get<ModularKey>(kp.key.variant());
    EXPECT_EQ(msb(k.modulus) + 1, bits);
    EXPECT_EQ(kp.key.n(), bits - 1);
    EXPECT_EQ(k.exponent, 65537);
    EXPECT_EQ(kp.size_parameter, bits);
  }
}

TEST(CycleWalk, round_trips_at_64_bits) {
  Rng rng(9);
  const TdpKeyPair kp = gen(ModularConfig{64}, rng);
  EXPECT_EQ(kp.key.n(), 63u);
  for (int i = 0; i < 10000; ++i) {
    const BitString x = BitString::random(63, rng);
    const BitString y = eval(kp.key, x);
    ASSERT_EQ(y.size(), 63u);
    ASSERT_EQ(invert(kp.trapdoor, y), x);
  }
}

TEST(CycleWalk, round_trips_beyond_word_size) {
  Rng rng(10);
  for (std::size_t bits : {65u, 200u, 512u}) {
    const TdpKeyPair kp = gen(ModularConfig{bits}, rng);
    for (int i = 0; i < 50; ++i) {
      const BitString x = BitString::random(kp.key.n(), rng);
      ASSERT_EQ(invert(kp.trapdoor, eval(kp.key, x)), x);
    }
  }
}

TEST(Tdp, length_mismatch) {
  Rng rng(11);
  const TdpKeyPair kp = gen(MockTableConfig{4}, rng);
  EXPECT_THROW(eval(kp.key, B("101")), ContractViolation);
  EXPECT_THROW(invert(kp.trapdoor, B("10101")), ContractViolation);
}

TEST(Tdp, serialization_round_trip_and_determinism) {
  Rng rng(12);
  for (const TdpConfig& cfg : {TdpConfig(MockTableConfig{6}), TdpConfig(ModularConfig{40}),
                               TdpConfig(ModularConfig{300})}) {
    const TdpKeyPair kp = gen(cfg, rng);
    const auto text = kp.key.to_json().dump();
    const TdpKey key2 = TdpKey::from_json(nlohmann::json::parse(text));
    const TdpTrapdoor td2 = TdpTrapdoor::from_json(kp.trapdoor.to_json());
    EXPECT_EQ(key2, kp.key);
    EXPECT_EQ(key2.to_json().dump(), text);
    for (int i = 0; i < 20; ++i) {
      const BitString x = BitString::random(kp.key.n(), rng);
      EXPECT_EQ(eval(key2, x), eval(kp.key, x));
      EXPECT_EQ(invert(td2, eval(key2, x)), x);
    }
  }
}

TEST(Tdp, key_json_format) {
  const TdpKeyPair kp = mock_from_table({1, 0});
  EXPECT_EQ(kp.key.to_json().dump(), R"({"n":1,"payload":{"table":[1,0]},"variant":"mock"})");
  Rng rng(0);
  const TdpKeyPair m = gen(ExplicitModulusConfig{21, 5}, rng);
  EXPECT_EQ(m.key.to_json().dump(),
            R"({"n":4,"payload":{"exponent":"5","modulus":"21"},"variant":"modular"})");
  EXPECT_EQ(m.trapdoor.to_json().dump(),
            R"({"n":4,"payload":{"inverse_exponent":"5","modulus":"21"},"variant":"modular"})");
}

TEST(Tdp, from_json_rejects_bad_keys) {
  using nlohmann::json;
  EXPECT_THROW(TdpKey::from_json(json::parse(R"({"n":1,"payload":{"table":[0,0]},"variant":"mock"})")),
               ConfigurationError);
  EXPECT_THROW(TdpKey::from_json(json::parse(R"({"n":2,"payload":{"table":[1,0]},"variant":"mock"})")),
               ConfigurationError);
  EXPECT_THROW(TdpKey::from_json(json::parse(R"({"n":1,"variant":"other"})")), ConfigurationError);
  EXPECT_THROW(TdpKey::from_json(json::parse(
                   R"({"n":5,"payload":{"exponent":"5","modulus":"21"},"variant":"modular"})")),
               ConfigurationError);
  EXPECT_THROW(TdpKey::from_json(json::parse(
                   R"({"n":4,"payload":{"exponent":"x","modulus":"21"},"variant":"modular"})")),
               ConfigurationError);
}
