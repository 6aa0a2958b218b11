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

#include "qproof/qproof.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "qproof/errors.hpp"
#include "qproof/runner.hpp"
#include "qproof/selftest.hpp"

struct qproof_keypair {
  qproof::KeyPtr key;
  qproof::TrapdoorPtr trapdoor;
};

struct qproof_summary {
  qproof::RunSummary summary;
};

struct qproof_gl_report {
  qproof::GlDemoReport report;
};

namespace {

thread_local std::string last_error;

qproof_status fail(qproof_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <class F>
qproof_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return QPROOF_OK;
  } catch (const qproof::ContractViolation& e) {
    return fail(QPROOF_ERR_CONTRACT, e.what());
  } catch (const qproof::ConfigurationError& e) {
    return fail(QPROOF_ERR_CONFIG, e.what());
  } catch (const qproof::ProtocolError& e) {
    return fail(QPROOF_ERR_PROTOCOL, e.what());
  } catch (const qproof::TransportError& e) {
    return fail(QPROOF_ERR_TRANSPORT, e.what());
  } catch (const qproof::IoError& e) {
    return fail(QPROOF_ERR_IO, e.what());
  } catch (const qproof::DecodeError& e) {
    return fail(QPROOF_ERR_DECODE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QPROOF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QPROOF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QPROOF_ERR_INTERNAL, "unknown error");
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw qproof::ContractViolation(what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qproof_keypair* wrap(qproof::TdpKeyPair pair) {
  auto shared = qproof::SharedKeyPair::from(std::move(pair));
  return new qproof_keypair{std::move(shared.key), std::move(shared.trapdoor)};
}

qproof::SharedKeyPair full_pair(const qproof_keypair* kp) {
  require(kp != nullptr, "key pair handle is null");
  if (!kp->key) throw qproof::ConfigurationError("public key missing");
  if (!kp->trapdoor) throw qproof::ConfigurationError("trapdoor missing");
  return qproof::SharedKeyPair{kp->key, kp->trapdoor};
}

qproof::RunConfig run_config(const qproof_run_options* o) {
  require(o != nullptr, "options are null");
  qproof::RunConfig c;
  switch (o->protocol) {
    case QPROOF_PROTOCOL_POQ: c.protocol = qproof::ProtocolKind::Poq; break;
    case QPROOF_PROTOCOL_RSP: c.protocol = qproof::ProtocolKind::Rsp; break;
    default: throw qproof::ConfigurationError("unknown protocol");
  }
  const auto strategy = qproof::parse_strategy(o->strategy ? o->strategy : "quantum");
  if (!strategy) throw qproof::ConfigurationError(std::string("unknown strategy '") + o->strategy + "'");
  c.strategy = *strategy;
  switch (o->mode) {
    case QPROOF_MODE_ESCROW: c.mode = qproof::BobMode::Escrow; break;
    case QPROOF_MODE_ENUMERATE: c.mode = qproof::BobMode::Enumerate; break;
    default: throw qproof::ConfigurationError("unknown mode");
  }
  c.seed = o->seed;
  c.trials = o->trials;
  c.threads = o->threads == 0 ? 1 : o->threads;
  c.timeout = std::chrono::milliseconds(o->timeout_ms == 0 ? qproof::kDefaultTimeout.count()
                                                           : o->timeout_ms);
  if (o->on_session) {
    auto cb = o->on_session;
    void* user = o->user;
    c.on_session = [cb, user](std::uint64_t i, const qproof::SessionReport& r) {
      cb(user, i, r.status == qproof::SessionStatus::Void ? 1 : 0,
         r.verdict ? (*r.verdict ? 1 : 0) : -1, r.detail.c_str());
    };
  }
  return c;
}

double ratio(std::uint64_t a, std::uint64_t b) {
  return b == 0 ? std::numeric_limits<double>::quiet_NaN() : static_cast<double>(a) / b;
}

}  // namespace

extern "C" {

const char* qproof_version(void) { return "1.0.0"; }

const char* qproof_last_error(void) { return last_error.c_str(); }

const char* qproof_status_name(qproof_status status) {
  switch (status) {
    case QPROOF_OK: return "ok";
    case QPROOF_ERR_CONFIG: return "configuration error";
    case QPROOF_ERR_CONTRACT: return "contract violation";
    case QPROOF_ERR_PROTOCOL: return "protocol error";
    case QPROOF_ERR_TRANSPORT: return "transport error";
    case QPROOF_ERR_IO: return "i/o error";
    case QPROOF_ERR_DECODE: return "decode error";
    case QPROOF_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void qproof_string_free(char* s) { delete[] s; }

qproof_status qproof_keygen_mock(uint32_t n, int identity, uint64_t seed, qproof_keypair** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    qproof::MockTableConfig cfg;
    cfg.n = n;
    cfg.identity = identity != 0;
    qproof::Rng rng = qproof::key_stream(seed);
    *out = wrap(qproof::gen(cfg, rng));
  });
}

qproof_status qproof_keygen_modular(uint32_t modulus_bits, uint64_t seed, qproof_keypair** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    qproof::Rng rng = qproof::key_stream(seed);
    *out = wrap(qproof::gen(qproof::ModularConfig{modulus_bits}, rng));
  });
}

qproof_status qproof_keygen_explicit(const char* modulus, const char* exponent,
                                     qproof_keypair** out) {
  return guarded([&] {
    require(out != nullptr && modulus != nullptr && exponent != nullptr, "null argument");
    qproof::ExplicitModulusConfig cfg;
    try {
      cfg.modulus = qproof::BigInt(modulus);
      cfg.exponent = qproof::BigInt(exponent);
    } catch (const std::exception&) {
      throw qproof::ConfigurationError("modulus and exponent must be decimal integers");
    }
    qproof::Rng rng(0);
    *out = wrap(qproof::gen(cfg, rng));
  });
}

qproof_status qproof_keypair_load(const char* public_path, const char* trapdoor_path,
                                  qproof_keypair** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(public_path != nullptr || trapdoor_path != nullptr, "no path given");
    auto kp = std::make_unique<qproof_keypair>();
    if (public_path) kp->key = std::make_shared<const qproof::TdpKey>(qproof::load_key(public_path));
    if (trapdoor_path) {
      kp->trapdoor = std::make_shared<const qproof::TdpTrapdoor>(qproof::load_trapdoor(trapdoor_path));
    }
    if (kp->key && kp->trapdoor && kp->key->n() != kp->trapdoor->n()) {
      throw qproof::ConfigurationError("key and trapdoor sizes differ");
    }
    *out = kp.release();
  });
}

qproof_status qproof_keypair_save(const qproof_keypair* kp, const char* public_path,
                                  const char* trapdoor_path) {
  return guarded([&] {
    require(kp != nullptr && public_path != nullptr && trapdoor_path != nullptr, "null argument");
    const auto pair = full_pair(kp);
    qproof::TdpKeyPair full{*pair.key, *pair.trapdoor, 0};
    qproof::save_keypair(full, public_path, trapdoor_path);
  });
}

void qproof_keypair_free(qproof_keypair* kp) { delete kp; }

size_t qproof_keypair_n(const qproof_keypair* kp) {
  if (!kp) return 0;
  if (kp->key) return kp->key->n();
  return kp->trapdoor ? kp->trapdoor->n() : 0;
}

int qproof_keypair_has_key(const qproof_keypair* kp) { return kp && kp->key ? 1 : 0; }

int qproof_keypair_has_trapdoor(const qproof_keypair* kp) { return kp && kp->trapdoor ? 1 : 0; }

qproof_status qproof_keypair_public_json(const qproof_keypair* kp, char** out) {
  return guarded([&] {
    require(kp != nullptr && out != nullptr, "null argument");
    if (!kp->key) throw qproof::ConfigurationError("public key missing");
    *out = dup_string(kp->key->to_json().dump());
  });
}

void qproof_run_options_init(qproof_run_options* o) {
  if (!o) return;
  *o = qproof_run_options{};
  o->protocol = QPROOF_PROTOCOL_POQ;
  o->strategy = "quantum";
  o->mode = QPROOF_MODE_ESCROW;
  o->trials = 1;
  o->threads = 1;
  o->timeout_ms = static_cast<uint32_t>(qproof::kDefaultTimeout.count());
}

qproof_status qproof_run_local(const qproof_keypair* kp, const qproof_run_options* options,
                               qproof_summary** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    const auto config = run_config(options);
    *out = new qproof_summary{qproof::run_local_sessions(config, full_pair(kp))};
  });
}

qproof_status qproof_run_verifier(const qproof_keypair* kp, const char* address, int listen,
                                  const qproof_run_options* options, qproof_summary** out) {
  return guarded([&] {
    require(out != nullptr && address != nullptr, "null argument");
    const auto config = run_config(options);
    *out = new qproof_summary{
        qproof::run_verifier(config, full_pair(kp), qproof::Endpoint{address, listen != 0})};
  });
}

qproof_status qproof_run_prover(const qproof_keypair* trapdoor, const char* address, int listen,
                                const qproof_run_options* options, qproof_summary** out) {
  return guarded([&] {
    require(out != nullptr && address != nullptr, "null argument");
    const auto config = run_config(options);
    qproof::TrapdoorPtr td = trapdoor ? trapdoor->trapdoor : nullptr;
    *out = new qproof_summary{qproof::run_prover(config, td, qproof::Endpoint{address, listen != 0})};
  });
}

qproof_status qproof_summary_acceptance(const qproof_summary* s, qproof_acceptance* out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    const auto& sum = s->summary;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    *out = qproof_acceptance{};
    if (sum.protocol == qproof::ProtocolKind::Rsp) {
      out->trials = sum.rsp.trials;
      out->void_sessions = sum.rsp.void_sessions;
      out->accepted = sum.rsp.consistent;
      out->p0 = out->p1 = out->p10 = out->p11 = nan;
      out->overall = ratio(sum.rsp.consistent, sum.rsp.trials - sum.rsp.void_sessions);
      out->overall_lo = out->overall_hi = nan;
      return;
    }
    const auto& st = sum.poq;
    const auto overall = st.overall();
    out->trials = st.trials;
    out->void_sessions = st.void_sessions;
    out->accepted = overall.accepted;
    out->p0 = ratio(st.v1_0.accepted, st.v1_0.trials);
    out->p1 = ratio(st.v1_1().accepted, st.v1_1().trials);
    out->p10 = ratio(st.v1_1_v2_0.accepted, st.v1_1_v2_0.trials);
    out->p11 = ratio(st.v1_1_v2_1.accepted, st.v1_1_v2_1.trials);
    out->overall = ratio(overall.accepted, overall.trials);
    if (overall.trials > 0) {
      const auto ci = overall.wilson();
      out->overall_lo = ci.lo;
      out->overall_hi = ci.hi;
    } else {
      out->overall_lo = out->overall_hi = nan;
    }
  });
}

qproof_status qproof_summary_json(const qproof_summary* s, char** out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    *out = dup_string(s->summary.to_json().dump());
  });
}

qproof_status qproof_summary_table(const qproof_summary* s, char** out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    if (s->summary.protocol == qproof::ProtocolKind::Rsp) {
      const auto& r = s->summary.rsp;
      *out = dup_string("sessions " + std::to_string(r.trials) + ", void " +
                        std::to_string(r.void_sessions) + ", consistent " +
                        std::to_string(r.consistent) + "\n");
    } else {
      *out = dup_string(s->summary.poq.to_table());
    }
  });
}

void qproof_summary_free(qproof_summary* s) { delete s; }

qproof_status qproof_gl_demo(uint32_t n, int leaky, uint64_t seed, qproof_gl_report** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new qproof_gl_report{qproof::run_gl_demo(n, leaky != 0, seed)};
  });
}

int qproof_gl_report_success(const qproof_gl_report* r) {
  return r && r->report.result.success ? 1 : 0;
}

qproof_status qproof_gl_report_json(const qproof_gl_report* r, char** out) {
  return guarded([&] {
    require(r != nullptr && out != nullptr, "null argument");
    *out = dup_string(r->report.to_json().dump());
  });
}

void qproof_gl_report_free(qproof_gl_report* r) { delete r; }

qproof_status qproof_selftest(uint64_t seed, qproof_selftest_callback cb, void* user,
                              uint32_t* failures) {
  return guarded([&] {
    uint32_t failed = 0;
    for (const auto& check : qproof::run_selftest(seed)) {
      if (!check.passed) ++failed;
      if (cb) cb(user, check.name.c_str(), check.passed ? 1 : 0, check.detail.c_str());
    }
    if (failures) *failures = failed;
  });
}

}  // extern "C"
