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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "qproof/qproof.h"

namespace {

std::string take(char* s) {
  std::string out(s);
  qproof_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, version_and_status_names) {
  EXPECT_STREQ(qproof_version(), "1.0.0");
  EXPECT_STREQ(qproof_status_name(QPROOF_OK), "ok");
  EXPECT_STREQ(qproof_status_name(QPROOF_ERR_TRANSPORT), "transport error");
}

TEST(CApi, keygen_save_load) {
  qproof_keypair* kp = nullptr;
  ASSERT_EQ(qproof_keygen_modular(64, 1, &kp), QPROOF_OK);
  EXPECT_EQ(qproof_keypair_n(kp), 63u);
  EXPECT_EQ(qproof_keypair_has_trapdoor(kp), 1);
  char* json = nullptr;
  ASSERT_EQ(qproof_keypair_public_json(kp, &json), QPROOF_OK);
  const std::string text = take(json);
  EXPECT_NE(text.find("\"variant\":\"modular\""), std::string::npos);
  EXPECT_EQ(text.find("inverse"), std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "qproof-capi-test";
  std::filesystem::create_directories(dir);
  const auto pub = (dir / "k.json").string();
  const auto td = (dir / "k.json.td").string();
  ASSERT_EQ(qproof_keypair_save(kp, pub.c_str(), td.c_str()), QPROOF_OK);
  qproof_keypair_free(kp);

  qproof_keypair* only_td = nullptr;
  ASSERT_EQ(qproof_keypair_load(nullptr, td.c_str(), &only_td), QPROOF_OK);
  EXPECT_EQ(qproof_keypair_has_key(only_td), 0);
  EXPECT_EQ(qproof_keypair_n(only_td), 63u);
  qproof_keypair_free(only_td);

  qproof_keypair* missing = nullptr;
  EXPECT_EQ(qproof_keypair_load((dir / "nope").string().c_str(), nullptr, &missing), QPROOF_ERR_IO);
  EXPECT_NE(std::string(qproof_last_error()).find("cannot open"), std::string::npos);
  EXPECT_EQ(missing, nullptr);
}

TEST(CApi, keygen_errors) {
  qproof_keypair* kp = nullptr;
  EXPECT_EQ(qproof_keygen_mock(0, 0, 1, &kp), QPROOF_ERR_CONFIG);
  EXPECT_EQ(qproof_keygen_mock(21, 0, 1, &kp), QPROOF_ERR_CONFIG);
  EXPECT_EQ(qproof_keygen_modular(4, 1, &kp), QPROOF_ERR_CONFIG);
  EXPECT_EQ(qproof_keygen_explicit("21", "3", &kp), QPROOF_ERR_CONFIG);
  EXPECT_EQ(qproof_keygen_explicit("twenty", "3", &kp), QPROOF_ERR_CONFIG);
  EXPECT_EQ(qproof_keygen_mock(4, 0, 1, nullptr), QPROOF_ERR_CONTRACT);
  EXPECT_EQ(kp, nullptr);
  ASSERT_EQ(qproof_keygen_explicit("21", "5", &kp), QPROOF_OK);
  EXPECT_EQ(qproof_keypair_n(kp), 4u);
  qproof_keypair_free(kp);
  ASSERT_EQ(qproof_keygen_mock(8, 1, 1, &kp), QPROOF_OK);
  EXPECT_EQ(qproof_keypair_n(kp), 8u);
  qproof_keypair_free(kp);
}

TEST(CApi, local_run_and_summary) {
  qproof_keypair* kp = nullptr;
  ASSERT_EQ(qproof_keygen_modular(24, 2, &kp), QPROOF_OK);
  qproof_run_options opt;
  qproof_run_options_init(&opt);
  opt.trials = 2000;
  opt.seed = 3;
  struct Count {
    int sessions = 0;
    int accepts = 0;
  } count;
  opt.user = &count;
  opt.on_session = [](void* user, uint64_t, int status, int verdict, const char*) {
    auto* c = static_cast<Count*>(user);
    ++c->sessions;
    c->accepts += status == 0 && verdict == 1;
  };
  qproof_summary* s = nullptr;
  ASSERT_EQ(qproof_run_local(kp, &opt, &s), QPROOF_OK);
  qproof_acceptance acc;
  ASSERT_EQ(qproof_summary_acceptance(s, &acc), QPROOF_OK);
  EXPECT_EQ(acc.trials, 2000u);
  EXPECT_EQ(acc.void_sessions, 0u);
  EXPECT_EQ(count.sessions, 2000);
  EXPECT_EQ(static_cast<uint64_t>(count.accepts), acc.accepted);
  EXPECT_DOUBLE_EQ(acc.p0, 1.0);
  EXPECT_NEAR(acc.overall, 0.9268, 0.03);
  EXPECT_LT(acc.overall_lo, acc.overall);
  EXPECT_GT(acc.overall_hi, acc.overall);
  char* text = nullptr;
  ASSERT_EQ(qproof_summary_json(s, &text), QPROOF_OK);
  EXPECT_NE(take(text).find("qproof.run.v1"), std::string::npos);
  ASSERT_EQ(qproof_summary_table(s, &text), QPROOF_OK);
  EXPECT_NE(take(text).find("overall"), std::string::npos);
  qproof_summary_free(s);

  opt.strategy = "telepathic";
  EXPECT_EQ(qproof_run_local(kp, &opt, &s), QPROOF_ERR_CONFIG);
  opt.strategy = "quantum";
  opt.mode = QPROOF_MODE_ENUMERATE;
  EXPECT_EQ(qproof_run_local(kp, &opt, &s), QPROOF_ERR_CONFIG);
  EXPECT_NE(std::string(qproof_last_error()).find("n <= 20"), std::string::npos);

  opt.mode = QPROOF_MODE_ESCROW;
  opt.protocol = QPROOF_PROTOCOL_RSP;
  opt.on_session = nullptr;
  opt.trials = 20;
  ASSERT_EQ(qproof_run_local(kp, &opt, &s), QPROOF_OK);
  ASSERT_EQ(qproof_summary_acceptance(s, &acc), QPROOF_OK);
  EXPECT_EQ(acc.accepted, 20u);
  EXPECT_TRUE(std::isnan(acc.p0));
  qproof_summary_free(s);
  qproof_keypair_free(kp);
}

TEST(CApi, prover_needs_escrow) {
  qproof_run_options opt;
  qproof_run_options_init(&opt);
  qproof_summary* s = nullptr;
  EXPECT_EQ(qproof_run_prover(nullptr, "127.0.0.1:1", 0, &opt, &s), QPROOF_ERR_CONFIG);
  opt.strategy = "classical-optimal";
  opt.timeout_ms = 100;
  EXPECT_EQ(qproof_run_prover(nullptr, "127.0.0.1:1", 0, &opt, &s), QPROOF_ERR_TRANSPORT);
}

TEST(CApi, gl_demo) {
  qproof_gl_report* r = nullptr;
  ASSERT_EQ(qproof_gl_demo(12, 1, 4, &r), QPROOF_OK);
  EXPECT_EQ(qproof_gl_report_success(r), 1);
  char* json = nullptr;
  ASSERT_EQ(qproof_gl_report_json(r, &json), QPROOF_OK);
  EXPECT_NE(take(json).find("\"success\":true"), std::string::npos);
  qproof_gl_report_free(r);
  EXPECT_EQ(qproof_gl_demo(0, 1, 4, &r), QPROOF_ERR_CONFIG);
}

TEST(CApi, selftest_passes) {
  std::vector<std::string> names;
  uint32_t failures = 99;
  ASSERT_EQ(qproof_selftest(
                1,
                [](void* user, const char* name, int, const char*) {
                  static_cast<std::vector<std::string>*>(user)->push_back(name);
                },
                &names, &failures),
            QPROOF_OK);
  EXPECT_EQ(failures, 0u);
  EXPECT_GE(names.size(), 7u);
}

TEST(CApi, null_handles_are_contract_errors) {
  char* out = nullptr;
  EXPECT_EQ(qproof_summary_json(nullptr, &out), QPROOF_ERR_CONTRACT);
  EXPECT_EQ(qproof_keypair_public_json(nullptr, &out), QPROOF_ERR_CONTRACT);
  EXPECT_EQ(qproof_keypair_n(nullptr), 0u);
  qproof_keypair_free(nullptr);
  qproof_summary_free(nullptr);
  qproof_string_free(nullptr);
}
