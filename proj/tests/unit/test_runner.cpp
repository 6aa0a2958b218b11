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

#include <filesystem>
#include <fstream>
#include <future>

#include "qproof/errors.hpp"
#include "qproof/runner.hpp"

using namespace qproof;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() /
             ("qproof-runner-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
              "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  std::filesystem::create_directories(dir);
  return dir;
}

std::uint16_t free_port() {
  auto l = SocketListener::listen("127.0.0.1:0");
  return l.port();
}

}  // namespace

TEST(KeyFiles, save_and_load) {
  const auto dir = temp_dir();
  Rng rng(1);
  const TdpKeyPair kp = gen(ModularConfig{40}, rng);
  const auto pub = (dir / "k.json").string();
  const auto td = (dir / "k.json.td").string();
  save_keypair(kp, pub, td);
  EXPECT_EQ(load_key(pub), kp.key);
  const TdpTrapdoor t = load_trapdoor(td);
  const BitString x = BitString::random(39, rng);
  EXPECT_EQ(invert(t, eval(kp.key, x)), x);

  std::ifstream in(pub);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, kp.key.to_json().dump() + "\n");
  EXPECT_EQ(text.find("inverse"), std::string::npos);
}

TEST(KeyFiles, errors) {
  const auto dir = temp_dir();
  EXPECT_THROW(load_key((dir / "missing.json").string()), IoError);
  std::ofstream((dir / "bad.json").string()) << "{not json";
  EXPECT_THROW(load_key((dir / "bad.json").string()), ConfigurationError);
  Rng rng(2);
  EXPECT_THROW(save_keypair(gen(MockTableConfig{3}, rng), (dir / "no/such/dir/k").string(),
                            (dir / "k.td").string()),
               IoError);
}

TEST(RunLocal, poq_sessions_report_each_verdict) {
  Rng rng(3);
  const auto kp = SharedKeyPair::from(gen(ModularConfig{20}, rng));
  RunConfig cfg;
  cfg.trials = 50;
  cfg.seed = 4;
  std::vector<int> seen;
  cfg.on_session = [&](std::uint64_t i, const SessionReport& r) {
    EXPECT_EQ(i, seen.size());
    seen.push_back(r.verdict ? *r.verdict : -1);
  };
  const RunSummary s = run_local_sessions(cfg, kp);
  ASSERT_EQ(seen.size(), 50u);
  EXPECT_EQ(static_cast<std::uint64_t>(std::count(seen.begin(), seen.end(), 1)), s.poq.overall().accepted);
  const auto j = s.to_json();
  EXPECT_EQ(j["schema"], kRunSchema);
  EXPECT_EQ(j["stats"]["schema"], kStatsSchema);
  EXPECT_EQ(j.dump().find("inverse"), std::string::npos);
}

TEST(RunLocal, rsp_sessions_are_consistent) {
  Rng rng(5);
  const auto kp = SharedKeyPair::from(gen(MockTableConfig{8}, rng));
  RunConfig cfg;
  cfg.protocol = ProtocolKind::Rsp;
  cfg.trials = 100;
  for (auto mode : {BobMode::Escrow, BobMode::Enumerate}) {
    cfg.mode = mode;
    const RunSummary s = run_local_sessions(cfg, kp);
    EXPECT_EQ(s.rsp.trials, 100u);
    EXPECT_EQ(s.rsp.consistent, 100u);
  }
  cfg.strategy = Strategy::ClassicalOptimal;
  EXPECT_EQ(run_local_sessions(cfg, kp).rsp.consistent, 100u);
}

TEST(RunLocal, enumerate_mode_rejects_large_keys) {
  Rng rng(6);
  const auto kp = SharedKeyPair::from(gen(ModularConfig{33}, rng));
  RunConfig cfg;
  cfg.mode = BobMode::Enumerate;
  EXPECT_THROW(run_local_sessions(cfg, kp), ConfigurationError);
  cfg.trials = 0;
  EXPECT_THROW(run_local_sessions(cfg, kp), ConfigurationError);
}

TEST(RunNetwork, verifier_and_prover_agree_with_local_run) {
  Rng rng(7);
  const auto kp = SharedKeyPair::from(gen(ModularConfig{24}, rng));
  for (auto protocol : {ProtocolKind::Poq, ProtocolKind::Rsp}) {
    RunConfig cfg;
    cfg.protocol = protocol;
    cfg.trials = 40;
    cfg.seed = 8;
    cfg.timeout = std::chrono::milliseconds(5000);
    const std::string address = "127.0.0.1:" + std::to_string(free_port());
    auto prover = std::async(std::launch::async, [&] {
      return run_prover(cfg, kp.trapdoor, Endpoint{address, false});
    });
    const RunSummary v = run_verifier(cfg, kp, Endpoint{address, true});
    const RunSummary p = prover.get();
    const RunSummary local = run_local_sessions(cfg, kp);
    if (protocol == ProtocolKind::Poq) {
      EXPECT_EQ(v.poq.v1_0.accepted, local.poq.v1_0.accepted);
      EXPECT_EQ(v.poq.v1_1_v2_0.trials, local.poq.v1_1_v2_0.trials);
      EXPECT_EQ(v.poq.v1_1_v2_1.accepted, local.poq.v1_1_v2_1.accepted);
      EXPECT_EQ(p.poq.overall().accepted, local.poq.overall().accepted);
      EXPECT_EQ(p.poq.v1_1_v2_1.trials, local.poq.v1_1_v2_1.trials);
      EXPECT_EQ(p.poq.n, 23u);
    } else {
      EXPECT_EQ(v.rsp.consistent, 40u);
      EXPECT_EQ(p.rsp.trials, 40u);
    }
  }
}

TEST(RunNetwork, prover_configuration_errors) {
  RunConfig cfg;
  cfg.timeout = std::chrono::milliseconds(200);
  EXPECT_THROW(run_prover(cfg, nullptr, Endpoint{"127.0.0.1:1", false}), ConfigurationError);

  // Enumerating prover facing a key beyond the enumeration bound.
  Rng rng(9);
  const auto kp = SharedKeyPair::from(gen(ModularConfig{33}, rng));
  cfg.mode = BobMode::Enumerate;
  cfg.timeout = std::chrono::milliseconds(3000);
  const std::string address = "127.0.0.1:" + std::to_string(free_port());
  auto verifier = std::async(std::launch::async, [&] {
    return run_verifier(cfg, kp, Endpoint{address, true});
  });
  EXPECT_THROW(run_prover(cfg, nullptr, Endpoint{address, false}), ConfigurationError);
  EXPECT_EQ(verifier.get().poq.void_sessions, 1u);
}

TEST(RunNetwork, connection_failure) {
  RunConfig cfg;
  cfg.strategy = Strategy::ClassicalOptimal;
  cfg.timeout = std::chrono::milliseconds(100);
  EXPECT_THROW(run_prover(cfg, nullptr, Endpoint{"127.0.0.1:1", false}), TransportError);
}

TEST(GlDemo, leaky_and_optimal) {
  const auto leaky = run_gl_demo(16, true, 1);
  EXPECT_TRUE(leaky.result.success);
  const auto j = leaky.to_json();
  EXPECT_EQ(j["true_pair"], j["recovered_pair"]);
  const auto optimal = run_gl_demo(16, false, 1);
  EXPECT_FALSE(optimal.result.success);
  EXPECT_TRUE(optimal.to_json()["recovered_pair"].is_null());
  EXPECT_TRUE(run_gl_demo(3, true, 2).result.success);
  EXPECT_THROW(run_gl_demo(0, true, 1), ConfigurationError);
}
