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

#include "qproof/rsp.hpp"

#include <utility>

#include "qproof/errors.hpp"

namespace qproof {

SharedKeyPair SharedKeyPair::from(TdpKeyPair pair) {
  return SharedKeyPair{std::make_shared<const TdpKey>(std::move(pair.key)),
                       std::make_shared<const TdpTrapdoor>(std::move(pair.trapdoor))};
}

HashQuerySet RspTranscript::query_set() const {
  if (!key) throw ContractViolation("transcript has no key");
  return HashQuerySet(key->n(), queries);
}

nlohmann::json RspTranscript::to_json() const {
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& h : queries) qs.push_back(h.to_string());
  return {{"key", key ? key->to_json() : nlohmann::json()},
          {"queries", std::move(qs)},
          {"answers", answers}};
}

RspTranscript RspTranscript::from_json(const nlohmann::json& j) {
  RspTranscript t;
  t.key = std::make_shared<const TdpKey>(TdpKey::from_json(j.at("key")));
  for (const auto& h : j.at("queries")) t.queries.push_back(BitString::from_string(h.get<std::string>()));
  t.answers = j.at("answers").get<std::vector<std::uint8_t>>();
  return t;
}

StringPair make_pair_ordered(BitString a, BitString b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

StringPair alice_output(const TdpTrapdoor& td, const RspTranscript& transcript) {
  const SolutionPair ys = solve_two_solutions(transcript.query_set(), transcript.answers);
  return make_pair_ordered(invert(td, ys.y0), invert(td, ys.y1));
}

bool rsp_outcome_consistent(const RspTranscript& transcript, const RspOutcome& outcome) {
  const SolutionPair ys = solve_two_solutions(transcript.query_set(), transcript.answers);
  const auto& [x0, x1] = outcome.alice_pair;
  const BitString f0 = eval(*transcript.key, x0);
  const BitString f1 = eval(*transcript.key, x1);
  const bool images_match = (f0 == ys.y0 && f1 == ys.y1) || (f0 == ys.y1 && f1 == ys.y0);
  if (!images_match) return false;
  if (!outcome.bob_state) return true;
  return outcome.bob_state->x0 == x0 && outcome.bob_state->x1 == x1;
}

// --- Alice -------------------------------------------------------------------

AliceSession::AliceSession(SharedKeyPair keypair, Rng& rng)
    : keypair_(std::move(keypair)), queries_(sample_hash_queries(keypair_.key->n(), rng)) {
  transcript_.key = keypair_.key;
  transcript_.queries = queries_.queries();
}

std::vector<Message> AliceSession::start() {
  if (started_) throw ContractViolation("session already started");
  started_ = true;
  std::vector<Message> out{KeyMessage{keypair_.key}};
  if (queries_.rounds() == 0) {
    complete();
  } else {
    out.push_back(HashQueryMessage{1, queries_.query(1)});
  }
  return out;
}

std::vector<Message> AliceSession::on_message(const Message& m) {
  const auto* answer = std::get_if<HashAnswerMessage>(&m);
  if (!started_ || finished() || answer == nullptr) {
    throw ProtocolError("unexpected '" + std::string(message_tag(m)) + "' during hashing");
  }
  const std::size_t expected = transcript_.answers.size() + 1;
  if (answer->j != expected) {
    throw ProtocolError("answer for round " + std::to_string(answer->j) + ", expected " +
                        std::to_string(expected));
  }
  if (answer->c > 1) throw ProtocolError("hash answer is not a bit");
  transcript_.answers.push_back(answer->c);
  if (transcript_.answers.size() == queries_.rounds()) {
    complete();
    return {};
  }
  return {HashQueryMessage{static_cast<std::uint32_t>(expected + 1), queries_.query(expected + 1)}};
}

void AliceSession::complete() {
  const SolutionPair ys = solve_two_solutions(queries_, transcript_.answers);
  output_ = make_pair_ordered(invert(*keypair_.trapdoor, ys.y0), invert(*keypair_.trapdoor, ys.y1));
}

// --- prover-side hashing -----------------------------------------------------

bool HashingResponder::hashing_complete() const noexcept {
  return key_ != nullptr && answers_.size() + 1 == key_->n();
}

std::vector<Message> HashingResponder::after_hashing(const Message& m) {
  throw ProtocolError("unexpected '" + std::string(message_tag(m)) + "' after hashing");
}

std::vector<Message> HashingResponder::on_message(const Message& m) {
  if (!key_) {
    const auto* key = std::get_if<KeyMessage>(&m);
    if (key == nullptr || !key->key) {
      throw ProtocolError("expected the key, got '" + std::string(message_tag(m)) + "'");
    }
    key_ = key->key;
    on_key();
    if (hashing_complete()) on_hashing_complete();
    return {};
  }
  if (hashing_complete()) return after_hashing(m);

  const auto* query = std::get_if<HashQueryMessage>(&m);
  if (query == nullptr) {
    throw ProtocolError("expected a hash query, got '" + std::string(message_tag(m)) + "'");
  }
  const std::size_t j = answers_.size() + 1;
  if (query->j != j || query->h.size() != key_->n() ||
      !HashQuerySet::has_round_prefix(query->h, j)) {
    throw ProtocolError("malformed hash query for round " + std::to_string(j));
  }
  queries_.push_back(query->h);
  const bool c = answer_query(query->h);
  answers_.push_back(c ? 1 : 0);
  if (hashing_complete()) on_hashing_complete();
  return {HashAnswerMessage{static_cast<std::uint32_t>(j), static_cast<std::uint8_t>(c)}};
}

// --- honest Bob --------------------------------------------------------------

HonestRegister::HonestRegister(KeyPtr key, BobMode mode, TrapdoorPtr escrow)
    : key_(std::move(key)), mode_(mode), escrow_(std::move(escrow)) {
  if (mode_ == BobMode::Enumerate) {
    enumerated_.emplace(*key_);
    return;
  }
  if (!escrow_) throw ConfigurationError("escrow mode requires the escrowed trapdoor");
  if (escrow_->n() != key_->n()) throw ConfigurationError("escrowed trapdoor does not match key");
  // Spot-check that the escrow inverts this key.
  const BitString probe(key_->n());
  if (eval(*key_, invert(*escrow_, probe)) != probe) {
    throw ConfigurationError("escrowed trapdoor does not match key");
  }
}

bool HonestRegister::measure(const BitString& h, Rng& rng) {
  if (enumerated_) return enumerated_->measure_hash(h, rng);
  return rng.bit();
}

TwoTermState HonestRegister::final_state(const RspTranscript& transcript) const {
  if (enumerated_) return enumerated_->two_term_state();
  const auto [x0, x1] = alice_output(*escrow_, transcript);
  return TwoTermState::make(x0, x1);
}

HonestBob::HonestBob(BobMode mode, TrapdoorPtr escrow, Rng rng)
    : mode_(mode), escrow_(std::move(escrow)), rng_(std::move(rng)) {}

void HonestBob::on_key() { reg_.emplace(key_, mode_, escrow_); }

bool HonestBob::answer_query(const BitString& h) { return reg_->measure(h, rng_); }

void HonestBob::on_hashing_complete() { state_ = reg_->final_state(transcript()); }

// --- binding game --------------------------------------------------------------

BindingResult binding_game(const SharedKeyPair& keypair, BindingAdversary& adversary, Rng& rng) {
  const std::size_t n = keypair.key->n();
  const HashQuerySet queries = sample_hash_queries(n, rng);
  adversary.on_key(keypair.key);
  std::vector<std::uint8_t> answers;
  for (std::size_t j = 1; j <= queries.rounds(); ++j) {
    const std::uint8_t c = adversary.answer(j, queries.query(j));
    if (c > 1) return BindingResult::ProtocolError;
    answers.push_back(c);
  }
  const auto [alpha, beta] = adversary.reveal();
  if (alpha.size() != n || beta.size() != n) return BindingResult::ProtocolError;
  const SolutionPair ys = solve_two_solutions(queries, answers);
  const BitString fa = eval(*keypair.key, alpha);
  const BitString fb = eval(*keypair.key, beta);
  const bool win = (fa == ys.y0 && fb == ys.y1) || (fa == ys.y1 && fb == ys.y0);
  return win ? BindingResult::Win : BindingResult::Lose;
}

void TrapdoorBindingAdversary::on_key(const KeyPtr& key) {
  key_ = key;
  queries_.clear();
  answers_.clear();
}

std::uint8_t TrapdoorBindingAdversary::answer(std::size_t, const BitString& h) {
  queries_.push_back(h);
  answers_.push_back(rng_.bit() ? 1 : 0);
  return answers_.back();
}

StringPair TrapdoorBindingAdversary::reveal() {
  return alice_output(*td_, RspTranscript{key_, queries_, answers_});
}

void OneBranchBindingAdversary::on_key(const KeyPtr& key) {
  key_ = key;
  x_ = BitString::random(key->n(), rng_);
  y_ = eval(*key, x_);
}

std::uint8_t OneBranchBindingAdversary::answer(std::size_t, const BitString& h) {
  return inner_product(h, y_) ? 1 : 0;
}

StringPair OneBranchBindingAdversary::reveal() {
  return {x_, BitString::random(key_->n(), rng_)};
}

void EqualPairBindingAdversary::on_key(const KeyPtr& key) {
  x_ = BitString::random(key->n(), rng_);
  y_ = eval(*key, x_);
}

std::uint8_t EqualPairBindingAdversary::answer(std::size_t, const BitString& h) {
  return inner_product(h, y_) ? 1 : 0;
}

}  // namespace qproof
