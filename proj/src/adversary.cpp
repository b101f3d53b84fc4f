// Copyright 2026 The Setchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "setchain/adversary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "setchain/compresschain.hpp"
#include "setchain/hashchain.hpp"
#include "setchain/vanilla.hpp"

namespace setchain {

namespace {

struct KindName {
  AdversaryKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {AdversaryKind::kSilent, "Silent"},
    {AdversaryKind::kGarbageAppender, "GarbageAppender"},
    {AdversaryKind::kWithholder, "Withholder"},
    {AdversaryKind::kSelectiveServer, "SelectiveServer"},
    {AdversaryKind::kWrongBatchServer, "WrongBatchServer"},
    {AdversaryKind::kForgedProofSpammer, "ForgedProofSpammer"},
};

std::mt19937_64 action_rng(std::uint64_t seed, ProcessId id, std::uint64_t nonce) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id.value), static_cast<std::uint32_t>(nonce),
                    static_cast<std::uint32_t>(nonce >> 32)};
  return std::mt19937_64(seq);
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

/// Ignores every input and never answers.
class SilentServer final : public Server {
 public:
  using Server::Server;

  bool correct() const override { return false; }
  std::string kind() const override { return "Silent"; }
  AddResult add(const Element&) override { return {AddStatus::kIgnored}; }
  SetchainSnapshot get() const override { return state_.snapshot(); }
  void on_new_block(const Block&) override {}
  void submit_item(const BatchItem&) override {}
  BatchReply serve_batch(const Digest&, ProcessId) override { return BatchReply::no_reply(); }
  const SetchainState* state() const override { return &state_; }

 private:
  SetchainState state_;
};

/// Honest server of the run's algorithm plus scheduled garbage.
class ScheduledAdversary final : public Server {
 public:
  ScheduledAdversary(AdversaryKind kind, Algorithm algorithm, ServerContext ctx)
      : Server(ctx), kind_(kind), algorithm_(algorithm), inner_(make_server(algorithm, std::move(ctx))) {}

  bool correct() const override { return false; }
  std::string kind() const override { return to_string(kind_); }
  void start() override {
    inner_->start();
    for (const AdversaryAction& a : adversary_schedule(ctx_.config, kind_, ctx_.id)) {
      ctx_.scheduler->at(a.at, [this, a] { act(a); }, ctx_.id.value);
    }
  }
  AddResult add(const Element& e) override { return inner_->add(e); }
  SetchainSnapshot get() const override { return inner_->get(); }
  void on_new_block(const Block& b) override { inner_->on_new_block(b); }
  void submit_item(const BatchItem& item) override { inner_->submit_item(item); }
  BatchReply serve_batch(const Digest& d, ProcessId r) override { return inner_->serve_batch(d, r); }
  const SetchainState* state() const override { return inner_->state(); }

  std::uint64_t actions() const { return actions_; }

 private:
  void act(const AdversaryAction& a) {
    ++actions_;
    auto rng = action_rng(ctx_.config.seed, ctx_.id, a.nonce);
    const std::uint64_t epoch = inner_->state() ? inner_->state()->epoch() : 0;
    switch (a.kind) {
      case AdversaryAction::Kind::kGarbageBytes:
        ctx_.ledger->append(ctx_.id, garbage_tx(rng));
        break;
      case AdversaryAction::Kind::kInjectBytes:
        ctx_.ledger->inject_proposer_tx(ctx_.id, garbage_tx(rng));
        break;
      case AdversaryAction::Kind::kInvalidElement: {
        const ProcessId creator{ctx_.config.n + rng() % ctx_.config.n};
        Signature sig{};
        for (auto& b : sig) b = static_cast<std::uint8_t>(rng());
        inner_->submit_item(Element::make(creator, random_bytes(rng, 1 + rng() % 400), sig));
        break;
      }
      case AdversaryAction::Kind::kForgedSignatureProof: {
        Signature sig{};
        for (auto& b : sig) b = static_cast<std::uint8_t>(rng());
        inner_->submit_item(EpochProof{std::max<std::uint64_t>(1, epoch), sig, ctx_.id});
        break;
      }
      case AdversaryAction::Kind::kFutureEpochProof: {
        const Bytes digest = random_bytes(rng, kDigestSize);
        inner_->submit_item(EpochProof{epoch + 1000 + a.nonce, crypto::sign(ctx_.key, digest), ctx_.id});
        break;
      }
    }
  }

  /// Random bytes, sometimes shaped like the algorithm's own tx format so
  /// decoding gets past the tag check.
  Bytes garbage_tx(std::mt19937_64& rng) const {
    Bytes b = random_bytes(rng, 1 + rng() % 512);
    if (rng() % 2 == 0) return b;
    switch (algorithm_) {
      case Algorithm::kVanilla:
        b[0] = rng() % 2 ? kElementTag : kEpochProofTag;
        break;
      case Algorithm::kCompresschain: {
        const std::string name = rng() % 2 ? "brotli" : "null";
        Bytes framed{kCompressedBatchTag, static_cast<std::uint8_t>(name.size())};
        framed.insert(framed.end(), name.begin(), name.end());
        framed.insert(framed.end(), b.begin(), b.end());
        return framed;
      }
      case Algorithm::kHashchain:
        b = random_bytes(rng, kHashBatchSize);
        b[0] = kHashBatchTag;
        b[kHashBatchSize - 2] = 0;
        b[kHashBatchSize - 1] = 0;
        break;
    }
    return b;
  }

  AdversaryKind kind_;
  Algorithm algorithm_;
  std::unique_ptr<Server> inner_;
  std::uint64_t actions_ = 0;
};

/// Honest server of any algorithm, only flagged as faulty.
class FlaggedServer final : public Server {
 public:
  FlaggedServer(AdversaryKind kind, Algorithm algorithm, ServerContext ctx)
      : Server(ctx), kind_(kind), inner_(make_server(algorithm, std::move(ctx))) {}

  bool correct() const override { return false; }
  std::string kind() const override { return to_string(kind_); }
  void start() override { inner_->start(); }
  AddResult add(const Element& e) override { return inner_->add(e); }
  SetchainSnapshot get() const override { return inner_->get(); }
  void on_new_block(const Block& b) override { inner_->on_new_block(b); }
  void submit_item(const BatchItem& item) override { inner_->submit_item(item); }
  BatchReply serve_batch(const Digest& d, ProcessId r) override { return inner_->serve_batch(d, r); }
  const SetchainState* state() const override { return inner_->state(); }

 private:
  AdversaryKind kind_;
  std::unique_ptr<Server> inner_;
};

class WithholderServer final : public HashchainServer {
 public:
  using HashchainServer::HashchainServer;

  bool correct() const override { return false; }
  std::string kind() const override { return "Withholder"; }
  BatchReply serve_batch(const Digest&, ProcessId) override { return BatchReply::no_reply(); }
};

class SelectiveServer final : public HashchainServer {
 public:
  SelectiveServer(ServerContext ctx, std::set<ProcessId> targets)
      : HashchainServer(std::move(ctx)), targets_(std::move(targets)) {}

  bool correct() const override { return false; }
  std::string kind() const override { return "SelectiveServer"; }
  BatchReply serve_batch(const Digest& d, ProcessId requester) override {
    if (!targets_.contains(requester)) return BatchReply::no_reply();
    return HashchainServer::serve_batch(d, requester);
  }

 private:
  std::set<ProcessId> targets_;
};

class WrongBatchServer final : public HashchainServer {
 public:
  using HashchainServer::HashchainServer;

  bool correct() const override { return false; }
  std::string kind() const override { return "WrongBatchServer"; }
  BatchReply serve_batch(const Digest& d, ProcessId) override {
    Bytes wrong;
    if (SharedBytes b = stored_bytes(d)) {
      wrong = *b;
      wrong.back() ^= 0x01;
    } else {
      wrong.assign(d.begin(), d.end());
    }
    return BatchReply::found(std::make_shared<const Bytes>(std::move(wrong)));
  }
};

}  // namespace

std::string to_string(AdversaryKind k) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == k) return kn.name;
  }
  return "unknown";
}

std::optional<AdversaryKind> parse_adversary_kind(const std::string& name) {
  for (const auto& kn : kKindNames) {
    if (name == kn.name) return kn.kind;
  }
  return std::nullopt;
}

AdversaryMix parse_adversary_mix(const std::string& text) {
  AdversaryMix mix;
  if (text.empty() || text == "none") return mix;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string entry = text.substr(start, comma - start);
    start = comma + 1;
    const auto colon = entry.find(':');
    const std::string name = entry.substr(0, colon);
    const auto kind = parse_adversary_kind(name);
    if (!kind) throw ConfigError("unknown adversary kind '" + name + "'");
    std::uint64_t count = 1;
    if (colon != std::string::npos) {
      const std::string num = entry.substr(colon + 1);
      const bool digits = !num.empty() && num.size() <= 18 &&
                          std::all_of(num.begin(), num.end(), [](unsigned char ch) { return std::isdigit(ch); });
      if (!digits) throw ConfigError("bad adversary count in '" + entry + "'");
      count = std::stoull(num);
    }
    if (count > 0) mix.push_back({*kind, count});
  }
  return mix;
}

std::string to_string(const AdversaryMix& mix) {
  if (mix.empty()) return "none";
  std::string out;
  for (const auto& a : mix) {
    if (!out.empty()) out += ',';
    out += to_string(a.kind) + ":" + std::to_string(a.count);
  }
  return out;
}

std::uint64_t adversary_total(const AdversaryMix& mix) {
  std::uint64_t total = 0;
  for (const auto& a : mix) total += a.count;
  return total;
}

std::vector<std::pair<ProcessId, AdversaryKind>> assign_adversaries(const SystemConfig& cfg, const AdversaryMix& mix) {
  const std::uint64_t total = adversary_total(mix);
  if (total > cfg.fault_bound()) {
    throw ConfigError(std::to_string(total) + " adversaries configured but f = " + std::to_string(cfg.fault_bound()));
  }
  std::vector<std::pair<ProcessId, AdversaryKind>> out;
  std::uint64_t next = cfg.n;
  for (const auto& a : mix) {
    for (std::uint64_t i = 0; i < a.count; ++i) out.emplace_back(ProcessId{--next}, a.kind);
  }
  return out;
}

std::vector<AdversaryAction> adversary_schedule(const SystemConfig& cfg, AdversaryKind kind, ProcessId identity) {
  std::vector<AdversaryAction::Kind> cycle;
  if (kind == AdversaryKind::kGarbageAppender) {
    cycle = {AdversaryAction::Kind::kGarbageBytes, AdversaryAction::Kind::kInvalidElement,
             AdversaryAction::Kind::kInjectBytes};
  } else if (kind == AdversaryKind::kForgedProofSpammer) {
    cycle = {AdversaryAction::Kind::kForgedSignatureProof, AdversaryAction::Kind::kFutureEpochProof};
  } else {
    return {};
  }
  const auto count = static_cast<std::uint64_t>(std::floor(cfg.adversary_rate * cfg.injection_duration_s));
  std::vector<AdversaryAction> out;
  out.reserve(count);
  auto rng = action_rng(cfg.seed, identity, 0xadadadadULL);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  for (std::uint64_t k = 0; k < count; ++k) {
    const double t = (static_cast<double>(k) + jitter(rng)) / cfg.adversary_rate;
    out.push_back(AdversaryAction{from_millis(t * 1000.0), identity, cycle[k % cycle.size()], k + 1});
  }
  return out;
}

std::unique_ptr<Server> make_server(Algorithm algorithm, ServerContext ctx) {
  switch (algorithm) {
    case Algorithm::kVanilla: return std::make_unique<VanillaServer>(std::move(ctx));
    case Algorithm::kCompresschain: return std::make_unique<CompresschainServer>(std::move(ctx));
    case Algorithm::kHashchain: return std::make_unique<HashchainServer>(std::move(ctx));
  }
  throw ConfigError("unknown algorithm");
}

std::unique_ptr<Server> make_adversary(AdversaryKind kind, Algorithm algorithm, ServerContext ctx,
                                       std::set<ProcessId> targets) {
  switch (kind) {
    case AdversaryKind::kSilent: return std::make_unique<SilentServer>(std::move(ctx));
    case AdversaryKind::kGarbageAppender:
    case AdversaryKind::kForgedProofSpammer:
      return std::make_unique<ScheduledAdversary>(kind, algorithm, std::move(ctx));
    case AdversaryKind::kWithholder:
      if (algorithm == Algorithm::kHashchain) return std::make_unique<WithholderServer>(std::move(ctx));
      break;
    case AdversaryKind::kSelectiveServer:
      if (algorithm == Algorithm::kHashchain) {
        return std::make_unique<SelectiveServer>(std::move(ctx), std::move(targets));
      }
      break;
    case AdversaryKind::kWrongBatchServer:
      if (algorithm == Algorithm::kHashchain) return std::make_unique<WrongBatchServer>(std::move(ctx));
      break;
  }
  return std::make_unique<FlaggedServer>(kind, algorithm, std::move(ctx));
}

}  // namespace setchain
