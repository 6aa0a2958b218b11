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

// Command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qproof/qproof.h"

namespace {

constexpr double kRequiredGap = 0.04;
constexpr const char* kDefaultAddress = "127.0.0.1:7878";

struct CliError {
  std::string message;
};

void check(qproof_status st) {
  if (st != QPROOF_OK) {
    throw CliError{std::string(qproof_status_name(st)) + ": " + qproof_last_error()};
  }
}

struct KeyDeleter {
  void operator()(qproof_keypair* k) const { qproof_keypair_free(k); }
};
struct SummaryDeleter {
  void operator()(qproof_summary* s) const { qproof_summary_free(s); }
};
struct GlDeleter {
  void operator()(qproof_gl_report* r) const { qproof_gl_report_free(r); }
};
using KeyHandle = std::unique_ptr<qproof_keypair, KeyDeleter>;
using SummaryHandle = std::unique_ptr<qproof_summary, SummaryDeleter>;
using GlHandle = std::unique_ptr<qproof_gl_report, GlDeleter>;

std::string take(char* s) {
  std::string out(s ? s : "");
  qproof_string_free(s);
  return out;
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

void escrow_notice() {
  std::cerr << "\n"
               "**********************************************************************\n"
               "* ESCROW MODE: the simulated quantum prover reads the trapdoor.       *\n"
               "* Acceptance in this mode shows nothing about quantum capability.     *\n"
               "**********************************************************************\n\n";
}

// Key generation parameters shared by keygen, local runs and bench.
struct KeySpec {
  std::string variant = "modular";
  std::optional<unsigned> bits;
  std::optional<unsigned> n;
  bool identity = false;
  std::string modulus;
  std::string exponent = "65537";

  void add_to(CLI::App* app) {
    app->add_option("--variant", variant, "mock or modular")
        ->check(CLI::IsMember({"mock", "modular"}));
    app->add_option("--bits", bits, "modulus bit length (modular; default 33, so n = 32)");
    app->add_option("--n", n, "domain size in bits (mock default 8; modular uses n+1 modulus bits)");
    app->add_flag("--identity", identity, "identity table (mock only)");
    app->add_option("--modulus", modulus, "explicit small squarefree modulus, decimal (modular)");
    app->add_option("--exponent", exponent, "public exponent for --modulus");
  }

  KeyHandle generate(std::uint64_t seed) const {
    qproof_keypair* kp = nullptr;
    if (variant == "mock") {
      if (bits) throw CliError{"--bits applies to modular keys; use --n"};
      if (!modulus.empty()) throw CliError{"--modulus applies to modular keys"};
      check(qproof_keygen_mock(n.value_or(8), identity ? 1 : 0, seed, &kp));
    } else {
      if (identity) throw CliError{"--identity applies to mock keys"};
      if (!modulus.empty()) {
        if (bits || n) throw CliError{"--modulus cannot be combined with --bits or --n"};
        check(qproof_keygen_explicit(modulus.c_str(), exponent.c_str(), &kp));
      } else {
        if (bits && n) throw CliError{"give --bits or --n, not both"};
        const unsigned b = bits ? *bits : n ? *n + 1 : 33;
        check(qproof_keygen_modular(b, seed, &kp));
      }
    }
    return KeyHandle(kp);
  }
};

struct RunFlags {
  std::string role;
  std::string protocol = "poq";
  std::string strategy = "quantum";
  std::optional<std::string> mode;
  std::vector<std::string> listen;
  std::vector<std::string> connect;
  std::string key;
  std::string trapdoor;
  std::string escrow;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  unsigned threads = 1;
  std::optional<std::uint32_t> timeout_ms;
  bool quiet = false;
  KeySpec keyspec;
};

// `user` points at a bool: true for RSP runs.
void print_session(void* user, std::uint64_t index, int status, int verdict, const char* detail) {
  const bool rsp = *static_cast<const bool*>(user);
  std::cout << "session " << index << ": ";
  if (status != 0) {
    std::cout << "void";
  } else if (verdict < 0) {
    std::cout << "complete";
  } else if (rsp) {
    std::cout << (verdict ? "consistent" : "INCONSISTENT");
  } else {
    std::cout << (verdict ? "accept" : "reject");
  }
  if (detail && *detail) std::cout << " (" << detail << ")";
  std::cout << '\n';
}

int cmd_keygen(const KeySpec& spec, const std::string& out, std::uint64_t seed) {
  KeyHandle kp = spec.generate(seed);
  const std::string td_path = out + ".td";
  check(qproof_keypair_save(kp.get(), out.c_str(), td_path.c_str()));
  std::cout << "n = " << qproof_keypair_n(kp.get()) << '\n'
            << "public key: " << out << '\n'
            << "trapdoor:   " << td_path << " (keep secret)\n";
  return 0;
}

KeyHandle load(const std::string& pub, const std::string& td) {
  qproof_keypair* kp = nullptr;
  check(qproof_keypair_load(pub.empty() ? nullptr : pub.c_str(), td.empty() ? nullptr : td.c_str(),
                            &kp));
  return KeyHandle(kp);
}

int cmd_run(const RunFlags& f) {
  if (!f.listen.empty() && !f.connect.empty()) throw CliError{"--listen and --connect conflict"};
  const bool networked = !f.listen.empty() || !f.connect.empty();
  std::string role = f.role.empty() ? (networked ? "" : "local") : f.role;
  if (role.empty()) throw CliError{"--role is required with --listen or --connect"};
  if (role == "local" && networked) throw CliError{"a local run takes no --listen/--connect"};
  if (role != "local" && !networked) throw CliError{"--role " + role + " needs --listen or --connect"};

  std::string address;
  if (networked) {
    const auto& v = f.listen.empty() ? f.connect : f.listen;
    address = v.empty() || v.front().empty() ? env_or("POQ_ADDR", kDefaultAddress) : v.front();
  }
  std::uint32_t timeout = 30000;
  if (f.timeout_ms) {
    timeout = *f.timeout_ms;
  } else {
    const std::string env = env_or("POQ_TIMEOUT_MS", "");
    if (!env.empty()) {
      try {
        timeout = static_cast<std::uint32_t>(std::stoul(env));
      } catch (const std::exception&) {
        throw CliError{"POQ_TIMEOUT_MS must be a number of milliseconds"};
      }
    }
  }

  qproof_run_options opt;
  qproof_run_options_init(&opt);
  opt.protocol = f.protocol == "rsp" ? QPROOF_PROTOCOL_RSP : QPROOF_PROTOCOL_POQ;
  opt.strategy = f.strategy.c_str();
  opt.seed = f.seed;
  opt.trials = f.trials;
  opt.threads = f.threads;
  opt.timeout_ms = timeout;
  bool rsp = f.protocol == "rsp";
  if (!f.quiet) {
    opt.on_session = print_session;
    opt.user = &rsp;
  }

  // An honest prover without escrow has to enumerate its register.
  const bool quantum = f.strategy == "quantum";
  std::string mode = f.mode.value_or(role == "prover" && f.escrow.empty() ? "enumerate" : "escrow");
  opt.mode = mode == "enumerate" ? QPROOF_MODE_ENUMERATE : QPROOF_MODE_ESCROW;

  qproof_summary* raw = nullptr;
  if (role == "verifier") {
    if (f.key.empty() || f.trapdoor.empty()) throw CliError{"the verifier needs --key and --trapdoor"};
    if (!f.escrow.empty()) throw CliError{"--escrow is a prover flag"};
    KeyHandle kp = load(f.key, f.trapdoor);
    std::cerr << "verifier: n = " << qproof_keypair_n(kp.get()) << ", "
              << (f.listen.empty() ? "connecting to " : "listening on ") << address << '\n';
    check(qproof_run_verifier(kp.get(), address.c_str(), f.listen.empty() ? 0 : 1, &opt, &raw));
  } else if (role == "prover") {
    if (!f.key.empty()) throw CliError{"the prover receives the key from the verifier; drop --key"};
    if (!f.trapdoor.empty() && f.strategy != "leaky") {
      throw CliError{"--trapdoor on the prover side is only for the leaky strategy; use --escrow"};
    }
    if (!f.escrow.empty() && !(quantum && mode == "escrow")) {
      throw CliError{"--escrow only applies to --strategy quantum --mode escrow"};
    }
    if (quantum && mode == "escrow") {
      if (f.escrow.empty()) throw CliError{"escrow mode needs --escrow <trapdoor file>"};
      escrow_notice();
    }
    KeyHandle td;
    if (!f.escrow.empty()) td = load("", f.escrow);
    if (!f.trapdoor.empty()) td = load("", f.trapdoor);
    std::cerr << "prover (" << f.strategy << "): "
              << (f.listen.empty() ? "connecting to " : "listening on ") << address << '\n';
    check(qproof_run_prover(td.get(), address.c_str(), f.listen.empty() ? 0 : 1, &opt, &raw));
  } else {
    KeyHandle kp;
    if (!f.key.empty() || !f.trapdoor.empty()) {
      if (f.key.empty() || f.trapdoor.empty()) throw CliError{"a local run needs both --key and --trapdoor"};
      kp = load(f.key, f.trapdoor);
    } else {
      kp = f.keyspec.generate(f.seed);
    }
    if (quantum && mode == "escrow") escrow_notice();
    check(qproof_run_local(kp.get(), &opt, &raw));
  }
  SummaryHandle summary(raw);
  char* json = nullptr;
  check(qproof_summary_json(summary.get(), &json));
  std::cout << take(json) << '\n';
  return 0;
}

int cmd_bench(const KeySpec& spec, const std::string& mode, std::uint64_t seed,
              std::uint64_t trials, unsigned threads, bool json_out) {
  KeyHandle kp = spec.generate(seed);
  if (mode == "escrow") escrow_notice();
  const std::vector<std::string> strategies = {"quantum", "classical-optimal", "classical-baseline",
                                               "classical-random"};
  nlohmann::json runs = nlohmann::json::array();
  std::string table;
  std::vector<double> overall;
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    qproof_run_options opt;
    qproof_run_options_init(&opt);
    opt.strategy = strategies[i].c_str();
    opt.mode = mode == "enumerate" ? QPROOF_MODE_ENUMERATE : QPROOF_MODE_ESCROW;
    opt.seed = seed;
    opt.trials = trials;
    opt.threads = threads;
    qproof_summary* raw = nullptr;
    check(qproof_run_local(kp.get(), &opt, &raw));
    SummaryHandle s(raw);
    qproof_acceptance acc;
    check(qproof_summary_acceptance(s.get(), &acc));
    overall.push_back(acc.overall);
    char* text = nullptr;
    check(qproof_summary_json(s.get(), &text));
    runs.push_back(nlohmann::json::parse(take(text))["stats"]);
    check(qproof_summary_table(s.get(), &text));
    table += take(text) + "\n";
  }
  const double gap = overall[0] - overall[1];
  const bool holds = gap >= kRequiredGap;
  if (json_out) {
    nlohmann::json out = {{"schema", "qproof.bench-report.v1"},
                          {"n", qproof_keypair_n(kp.get())},
                          {"runs", runs},
                          {"gap", gap},
                          {"required_gap", kRequiredGap},
                          {"gap_holds", holds}};
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << table;
    std::printf("gap quantum - classical-optimal = %.4f (required %.2f): %s\n", gap, kRequiredGap,
                holds ? "holds" : "FAILS");
  }
  return holds ? 0 : 1;
}

int cmd_gl_demo(unsigned n, bool leaky, std::uint64_t seed, bool json) {
  qproof_gl_report* raw = nullptr;
  check(qproof_gl_demo(n, leaky ? 1 : 0, seed, &raw));
  GlHandle report(raw);
  char* text = nullptr;
  check(qproof_gl_report_json(report.get(), &text));
  const auto j = nlohmann::json::parse(take(text));
  if (json) {
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  auto pair_text = [](const nlohmann::json& p) {
    return p.is_null() ? std::string("(none)")
                       : "{" + p[0].get<std::string>() + ", " + p[1].get<std::string>() + "}";
  };
  std::cout << "prover:         " << j["prover"].get<std::string>() << '\n'
            << "n:              " << n << '\n'
            << "alice's pair:   " << pair_text(j["true_pair"]) << '\n'
            << "recovered pair: " << pair_text(j["recovered_pair"]) << '\n'
            << "z:              " << j["z"].get<std::string>() << '\n'
            << "success:        " << (j["success"].get<bool>() ? "yes" : "no") << '\n';
  return 0;
}

int cmd_selftest(std::uint64_t seed) {
  std::uint32_t failures = 0;
  auto cb = [](void*, const char* name, int passed, const char* detail) {
    std::cout << (passed ? "PASS " : "FAIL ") << name;
    if (!passed && detail && *detail) std::cout << ": " << detail;
    std::cout << std::endl;
  };
  check(qproof_selftest(seed, cb, nullptr, &failures));
  std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
            << '\n';
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qproof: remote state preparation and proofs of quantumness from trapdoor permutations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qproof_version());

  std::uint64_t seed = 0;

  auto* keygen = app.add_subcommand("keygen", "generate a key pair (<out> public, <out>.td trapdoor)");
  KeySpec keyspec;
  std::string out;
  keyspec.add_to(keygen);
  keygen->add_option("--out", out, "public key file")->required();
  keygen->add_option("--seed", seed, "random seed");

  auto* run = app.add_subcommand("run", "run protocol sessions, locally or as one party over TCP");
  RunFlags rf;
  run->add_option("--role", rf.role, "verifier, prover or local")
      ->check(CLI::IsMember({"verifier", "prover", "local"}));
  run->add_option("--protocol", rf.protocol, "rsp or poq")->check(CLI::IsMember({"rsp", "poq"}));
  run->add_option("--strategy", rf.strategy, "prover strategy")
      ->check(CLI::IsMember(
          {"quantum", "classical-optimal", "classical-baseline", "classical-random", "leaky"}));
  run->add_option("--mode", rf.mode, "quantum register simulation: escrow or enumerate")
      ->check(CLI::IsMember({"escrow", "enumerate"}));
  run->add_option("--listen", rf.listen, "accept connections on host:port (default $POQ_ADDR)")
      ->expected(0, 1);
  run->add_option("--connect", rf.connect, "connect to host:port (default $POQ_ADDR)")->expected(0, 1);
  run->add_option("--key", rf.key, "public key file (verifier, local)");
  run->add_option("--trapdoor", rf.trapdoor, "trapdoor file (verifier, local; leaky prover)");
  run->add_option("--escrow", rf.escrow, "escrowed trapdoor for the simulated quantum prover");
  run->add_option("--seed", rf.seed, "random seed");
  run->add_option("--trials", rf.trials, "number of sessions")->check(CLI::PositiveNumber);
  run->add_option("--threads", rf.threads, "worker threads for local runs")->check(CLI::PositiveNumber);
  run->add_option("--timeout-ms", rf.timeout_ms, "per-message timeout (default $POQ_TIMEOUT_MS or 30000)");
  run->add_flag("--quiet", rf.quiet, "omit per-session lines");
  rf.keyspec.add_to(run);

  auto* bench = app.add_subcommand("bench", "compare prover strategies; exit 1 if the gap is below 0.04");
  KeySpec bench_keys;
  std::string bench_mode = "escrow";
  std::uint64_t bench_trials = 10000;
  unsigned bench_threads = 1;
  bool bench_json = false;
  bench_keys.add_to(bench);
  bench->add_option("--mode", bench_mode, "escrow or enumerate")
      ->check(CLI::IsMember({"escrow", "enumerate"}));
  bench->add_option("--trials", bench_trials, "sessions per strategy")->check(CLI::PositiveNumber);
  bench->add_option("--threads", bench_threads, "worker threads")->check(CLI::PositiveNumber);
  bench->add_option("--seed", seed, "random seed");
  bench->add_flag("--json", bench_json, "emit JSON instead of a table");

  auto* gl = app.add_subcommand("gl-demo", "run the extraction attack once");
  unsigned gl_n = 16;
  bool gl_leaky = false;
  bool gl_optimal = false;
  gl->add_option("--n", gl_n, "domain size in bits");
  auto* leaky_flag = gl->add_flag("--leaky", gl_leaky, "attack the trapdoor-leaking prover");
  auto* optimal_flag = gl->add_flag("--optimal", gl_optimal, "attack the optimal classical prover");
  leaky_flag->excludes(optimal_flag);
  gl->add_option("--seed", seed, "random seed");
  bool gl_json = false;
  gl->add_flag("--json", gl_json, "emit JSON");

  auto* selftest = app.add_subcommand("selftest", "reduced property checks");
  selftest->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (keygen->parsed()) return cmd_keygen(keyspec, out, seed);
    if (run->parsed()) return cmd_run(rf);
    if (bench->parsed()) {
      return cmd_bench(bench_keys, bench_mode, seed, bench_trials, bench_threads, bench_json);
    }
    if (gl->parsed()) {
      if (!gl_leaky && !gl_optimal) throw CliError{"choose --leaky or --optimal"};
      return cmd_gl_demo(gl_n, gl_leaky, seed, gl_json);
    }
    if (selftest->parsed()) return cmd_selftest(seed);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
