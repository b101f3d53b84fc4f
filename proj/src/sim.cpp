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

#include "setchain/sim.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "setchain/hashchain.hpp"
#include "setchain/kernels.hpp"

namespace setchain {

bool PropertyReport::ok() const {
  return std::all_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.violations == 0; });
}

const PropertyResult* PropertyReport::find(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::string PropertyReport::summary() const {
  std::ostringstream out;
  for (const auto& r : results) {
    out << r.name << ": " << (r.skipped ? "skipped" : std::to_string(r.violations) + "/" + std::to_string(r.checked))
        << '\n';
    for (const auto& ex : r.examples) out << "  " << ex << '\n';
  }
  return out.str();
}

VirtualTime settle_window(const SystemConfig& cfg) {
  return 3 * (cfg.block_interval() + cfg.collector_timeout()) + 2 * cfg.request_timeout() + 4 * cfg.network_delay();
}

std::shared_ptr<const Corpus> make_corpus(const SystemConfig& cfg) {
  std::map<ProcessId, crypto::KeyPair> keys;
  crypto::KeyRegistry::build(cfg.seed, cfg.n, cfg.n, &keys);
  return std::make_shared<const Corpus>(kernels::generate_corpus(CorpusSpec::from_config(cfg), keys));
}

namespace {

struct ProofLanding {
  ProcessId signer;
  Signature sig{};
  VirtualTime at{};
};

struct EpochTrack {
  bool known = false;
  Digest digest{};
  VirtualTime consolidated_at{};
  std::vector<std::uint64_t> element_ids;
  std::vector<ProofLanding> pending;
  std::set<ProcessId> signers;
  std::optional<VirtualTime> commit;
};

struct TxInfo {
  ProcessId origin;
  std::vector<std::uint64_t> element_ids;
  std::vector<EpochProof> proofs;
  bool landed = false;
};

PropertyResult property(const char* name) {
  PropertyResult r;
  r.name = name;
  return r;
}

void note(PropertyResult& r, const std::string& msg) {
  ++r.violations;
  if (r.examples.size() < 5) r.examples.push_back(msg);
}

class Simulation final : public TxTracker {
 public:
  explicit Simulation(const RunOptions& opt);

  RunResult run();

  void on_batch_appended(ProcessId server, const Digest& key, const std::vector<BatchItem>& items) override;

 private:
  void submit(std::size_t k);
  void on_block(const Block& block);
  void on_reference_epoch(std::uint64_t j, const Epoch& contents);
  void land_proof(const EpochProof& p, VirtualTime at);
  void consider(std::uint64_t j, EpochTrack& e, ProcessId signer, const Signature& sig, VirtualTime at);
  void check_drained();

  PropertyReport check_properties(VirtualTime end, bool saturated) const;
  std::vector<const Server*> correct_servers() const;

  RunOptions opt_;
  SystemConfig cfg_;
  Scheduler scheduler_;
  std::map<ProcessId, crypto::KeyPair> keys_;
  crypto::KeyRegistry registry_;
  std::unique_ptr<Ledger> ledger_;
  std::unique_ptr<Validator> validator_;
  std::unique_ptr<BatchNetwork> network_;
  std::shared_ptr<const Corpus> corpus_;
  std::vector<std::unique_ptr<Server>> servers_;
  const Server* reference_ = nullptr;

  std::vector<ElementTrace> trace_;
  std::unordered_map<Element, std::uint64_t> id_of_;
  std::unordered_map<Digest, TxInfo, DigestHash> txs_;
  std::map<std::uint64_t, EpochTrack> epochs_;
  std::size_t next_submit_ = 0;
  std::uint64_t accepted_by_correct_ = 0;
  std::uint64_t committed_accepted_ = 0;
  std::optional<VirtualTime> drained_at_;
  std::optional<VirtualTime> end_at_;
  std::uint64_t epoch_subset_checks_ = 0;
  std::uint64_t epoch_subset_violations_ = 0;
};

Simulation::Simulation(const RunOptions& opt) : opt_(opt), cfg_(opt.config) {
  cfg_.validate();
  const auto assigned = assign_adversaries(cfg_, opt_.adversaries);
  registry_ = crypto::KeyRegistry::build(cfg_.seed, cfg_.n, cfg_.n, &keys_);

  corpus_ = opt_.corpus;
  if (!corpus_ || !(corpus_->spec == CorpusSpec::from_config(cfg_))) corpus_ = make_corpus(cfg_);

  LedgerConfig lc;
  lc.nodes = cfg_.n;
  lc.block_capacity = cfg_.block_capacity;
  lc.block_interval = cfg_.block_interval();
  lc.network_delay = cfg_.network_delay();
  lc.produce_empty_blocks = cfg_.produce_empty_blocks;
  lc.mempool_max_txs = cfg_.mempool_max_txs;
  lc.mempool_max_bytes = cfg_.mempool_max_bytes;
  ledger_ = std::make_unique<Ledger>(scheduler_, lc);
  validator_ = std::make_unique<Validator>(registry_);
  network_ = std::make_unique<BatchNetwork>(scheduler_, cfg_.network_delay(), cfg_.max_element_size);

  std::map<ProcessId, AdversaryKind> faulty(assigned.begin(), assigned.end());
  std::set<ProcessId> correct_ids;
  for (std::uint64_t i = 0; i < cfg_.n; ++i) {
    if (!faulty.contains(ProcessId{i})) correct_ids.insert(ProcessId{i});
  }
  // A SelectiveServer answers the lower half of the correct servers.
  std::set<ProcessId> targets;
  const std::size_t half = std::max<std::size_t>(1, correct_ids.size() / 2);
  for (ProcessId id : correct_ids) {
    if (targets.size() < half) targets.insert(id);
  }

  const auto codec = make_codec(cfg_.codec, cfg_.brotli_quality);
  for (std::uint64_t i = 0; i < cfg_.n; ++i) {
    const ProcessId id{i};
    ServerContext ctx{id, keys_.at(id), cfg_, &scheduler_, ledger_.get(), validator_.get(), this, network_.get(), codec};
    const auto it = faulty.find(id);
    servers_.push_back(it == faulty.end() ? make_server(opt_.algorithm, std::move(ctx))
                                          : make_adversary(it->second, opt_.algorithm, std::move(ctx), targets));
  }
  for (auto& s : servers_) {
    network_->attach(s.get());
    Server* raw = s.get();
    ledger_->subscribe(s->id(), [raw](const Block& b) { raw->on_new_block(b); });
    if (!raw->correct()) continue;
    if (reference_ == nullptr) reference_ = raw;
    raw->set_epoch_listener([this, raw](std::uint64_t j, const Epoch& g) {
      const SetchainState* st = raw->state();
      for (const Element& e : g) {
        ++epoch_subset_checks_;
        if (!st->in_set(e)) ++epoch_subset_violations_;
      }
      if (raw == reference_) on_reference_epoch(j, g);
    });
  }
  ledger_->observe_blocks([this](const Block& b) { on_block(b); });

  trace_.resize(corpus_->entries.size());
  id_of_.reserve(corpus_->entries.size());
  for (const CorpusEntry& e : corpus_->entries) {
    ElementTrace& t = trace_[e.id];
    t.id = e.id;
    t.client = e.client;
    t.server = e.server;
    t.size = e.element.canonical_bytes().size();
    t.t_add = e.t_add;
    id_of_.emplace(e.element, e.id);
  }
}

std::vector<const Server*> Simulation::correct_servers() const {
  std::vector<const Server*> out;
  for (const auto& s : servers_) {
    if (s->correct()) out.push_back(s.get());
  }
  return out;
}

void Simulation::on_batch_appended(ProcessId server, const Digest& key, const std::vector<BatchItem>& items) {
  auto [it, inserted] = txs_.try_emplace(key);
  if (!inserted) return;
  TxInfo& info = it->second;
  info.origin = server;
  const VirtualTime now = scheduler_.now();
  for (const BatchItem& item : items) {
    if (const auto* e = std::get_if<Element>(&item)) {
      const auto id = id_of_.find(*e);
      if (id == id_of_.end()) continue;
      info.element_ids.push_back(id->second);
      ElementTrace& t = trace_[id->second];
      if (!t.t_mempool_1) {
        t.t_mempool_1 = now;
        t.t_mempool_quorum = now + cfg_.network_delay();
        t.t_mempool_all = now + cfg_.network_delay();
      }
    } else {
      info.proofs.push_back(std::get<EpochProof>(item));
    }
  }
}

void Simulation::submit(std::size_t k) {
  const CorpusEntry& entry = corpus_->entries[k];
  Server& server = *servers_[entry.server.value];
  const AddResult r = server.add(entry.element);
  ElementTrace& t = trace_[k];
  t.submitted = true;
  t.add_status = r.status;
  if (r.accepted() && server.correct()) {
    t.accepted_by_correct = true;
    ++accepted_by_correct_;
  }
  next_submit_ = k + 1;
  if (next_submit_ < corpus_->entries.size()) {
    scheduler_.at(corpus_->entries[next_submit_].t_add, [this, n = next_submit_] { submit(n); }, entry.client.value);
  } else {
    check_drained();
  }
}

void Simulation::on_block(const Block& block) {
  const VirtualTime now = scheduler_.now();
  for (const LedgerTx& tx : block.txs) {
    Digest key{};
    if (opt_.algorithm == Algorithm::kHashchain) {
      const auto hb = decode_hash_batch(*tx.bytes);
      if (!hb) continue;
      if (!validator_->server_signature(hb->signer, ByteView{hb->digest.data(), hb->digest.size()}, hb->sig)) {
        continue;
      }
      key = hb->digest;
    } else {
      key = crypto::sha512(*tx.bytes);
    }
    const auto it = txs_.find(key);
    if (it == txs_.end() || it->second.landed) continue;
    it->second.landed = true;
    for (std::uint64_t id : it->second.element_ids) {
      if (!trace_[id].t_ledger) trace_[id].t_ledger = now;
    }
    for (const EpochProof& p : it->second.proofs) land_proof(p, now);
  }
  check_drained();
}

void Simulation::land_proof(const EpochProof& p, VirtualTime at) {
  if (p.epoch_no == 0) return;
  EpochTrack& e = epochs_[p.epoch_no];
  if (e.commit) return;
  if (!e.known) {
    e.pending.push_back(ProofLanding{p.signer, p.proof_sig, at});
    return;
  }
  consider(p.epoch_no, e, p.signer, p.proof_sig, at);
}

void Simulation::consider(std::uint64_t j, EpochTrack& e, ProcessId signer, const Signature& sig, VirtualTime at) {
  if (e.commit || e.signers.contains(signer)) return;
  if (!validator_->proof(EpochProof{j, sig, signer}, &e.digest)) return;
  e.signers.insert(signer);
  if (e.signers.size() < cfg_.quorum()) return;
  e.commit = at;
  for (std::uint64_t id : e.element_ids) {
    ElementTrace& t = trace_[id];
    if (t.t_commit) continue;
    t.t_commit = at;
    if (t.accepted_by_correct) ++committed_accepted_;
  }
}

void Simulation::on_reference_epoch(std::uint64_t j, const Epoch& contents) {
  EpochTrack& e = epochs_[j];
  e.known = true;
  e.digest = *reference_->state()->epoch_digest_of(j);
  e.consolidated_at = scheduler_.now();
  for (const Element& x : contents) {
    const auto id = id_of_.find(x);
    if (id == id_of_.end()) continue;
    e.element_ids.push_back(id->second);
    trace_[id->second].epoch = j;
  }
  std::vector<ProofLanding> pending = std::move(e.pending);
  e.pending.clear();
  std::stable_sort(pending.begin(), pending.end(),
                   [](const ProofLanding& a, const ProofLanding& b) { return a.at < b.at; });
  for (const ProofLanding& p : pending) consider(j, e, p.signer, p.sig, p.at);
}

void Simulation::check_drained() {
  if (drained_at_ || next_submit_ < corpus_->entries.size()) return;
  if (scheduler_.now() < cfg_.injection_end() && !corpus_->entries.empty()) return;
  if (committed_accepted_ < accepted_by_correct_) return;
  drained_at_ = scheduler_.now();
  end_at_ = *drained_at_ + settle_window(cfg_);
  scheduler_.at(*end_at_, [] {});
}

RunResult Simulation::run() {
  for (auto& s : servers_) s->start();
  ledger_->start();
  if (!corpus_->entries.empty()) {
    scheduler_.at(corpus_->entries.front().t_add, [this] { submit(0); }, corpus_->entries.front().client.value);
  } else {
    scheduler_.at(cfg_.injection_end(), [this] { check_drained(); });
  }
  scheduler_.run_until(cfg_.max_virtual_time(), [this] { return end_at_ && scheduler_.now() >= *end_at_; });

  const VirtualTime end = scheduler_.now();
  const bool saturated = !drained_at_;

  RunResult r;
  r.settle_window = settle_window(cfg_);
  r.report = build_report(trace_, to_seconds(end));
  r.report.saturated = saturated;
  r.report.drained_at_s = drained_at_ ? to_seconds(*drained_at_) : -1.0;
  r.report.brotli_quality = cfg_.brotli_quality;

  RunCounters& c = r.report.counters;
  c.mempool_reject = ledger_->counters().mempool_reject;
  c.blocks = ledger_->height();
  for (const BlockPtr& b : ledger_->blocks()) c.ledger_bytes += b->byte_size();
  c.epochs = reference_ ? reference_->state()->epoch() : 0;
  c.signature_verifications = validator_->signature_verifications();
  for (const auto& s : servers_) {
    if (s->correct()) c.garbage_tx += s->counters().garbage_tx;
    c.bad_batch_response += s->counters().bad_batch_response;
    if (!s->correct()) c.batch_responses_served_by_faulty += network_->responses_served(s->id());
    const SetchainState* st = s->state();
    r.servers.push_back(ServerSummary{s->id(), s->kind(), s->correct(), s->counters(), st ? st->epoch() : 0,
                                      st ? st->the_set().size() : 0, st ? st->proofs().size() : 0});
  }

  const VirtualTime excuse =
      saturated ? VirtualTime::zero() : end - 2 * cfg_.block_interval() - cfg_.network_delay();
  r.ledger_audit = ledger_->audit(excuse);

  if (opt_.algorithm == Algorithm::kHashchain) {
    std::unordered_set<Digest, DigestHash> withheld;
    for (const auto& [key, info] : txs_) {
      const Server& origin = *servers_[info.origin.value];
      if (origin.kind() == "Withholder") withheld.insert(key);
    }
    r.withheld_batches = withheld.size();
    for (const Server* s : correct_servers()) {
      const auto* hs = dynamic_cast<const HashchainServer*>(s);
      if (hs == nullptr) continue;
      for (const Digest& d : hs->consolidated()) {
        if (withheld.contains(d)) ++r.withheld_consolidations;
      }
    }
  }

  if (opt_.check_properties) r.properties = check_properties(end, saturated);

  if (opt_.keep_snapshots) {
    for (const Server* s : correct_servers()) r.snapshots.emplace(s->id(), s->get());
  }

  if (reference_ != nullptr) {
    std::optional<std::uint64_t> first;
    for (const ElementTrace& t : trace_) {
      if (t.t_commit && (!first || *t.t_commit < *trace_[*first].t_commit)) first = t.id;
    }
    if (first) {
      const SetchainState* st = reference_->state();
      SetchainSnapshot snap;
      snap.history = st->history();
      snap.epoch = st->epoch();
      snap.proofs = st->proofs();
      r.certificate = certify(snap, corpus_->entries[*first].element, cfg_.fault_bound(), registry_);
    }
  }

  r.registry = registry_;
  r.trace = std::move(trace_);
  return r;
}

PropertyReport Simulation::check_properties(VirtualTime end, bool saturated) const {
  PropertyReport rep;
  const auto correct = correct_servers();
  const std::uint64_t f = cfg_.fault_bound();

  PropertyResult sets = property("consistent_sets");
  sets.checked = epoch_subset_checks_;
  sets.violations = epoch_subset_violations_;
  for (const Server* s : correct) {
    const SetchainState& st = *s->state();
    for (std::uint64_t j = 1; j <= st.epoch(); ++j) {
      for (const Element& e : *st.epoch_contents(j)) {
        ++sets.checked;
        if (!st.in_set(e)) note(sets, "server " + std::to_string(s->id().value) + " epoch " + std::to_string(j));
      }
    }
  }
  rep.results.push_back(std::move(sets));

  PropertyResult global = property("get_global");
  PropertyResult eventual = property("eventual_get");
  eventual.skipped = saturated;
  for (const ElementTrace& t : trace_) {
    if (!t.accepted_by_correct) continue;
    const Element& e = corpus_->entries[t.id].element;
    for (const Server* s : correct) {
      ++global.checked;
      if (!s->state()->in_set(e)) {
        note(global, "element " + std::to_string(t.id) + " missing from server " + std::to_string(s->id().value));
      }
      if (saturated) continue;
      ++eventual.checked;
      if (!s->state()->in_history(e)) {
        note(eventual, "element " + std::to_string(t.id) + " not in history of " + std::to_string(s->id().value));
      }
    }
  }
  rep.results.push_back(std::move(global));
  rep.results.push_back(std::move(eventual));

  PropertyResult unique = property("unique_epoch");
  for (const Server* s : correct) {
    const SetchainState& st = *s->state();
    std::unordered_set<Element> seen;
    for (std::uint64_t j = 1; j <= st.epoch(); ++j) {
      for (const Element& e : *st.epoch_contents(j)) {
        ++unique.checked;
        if (!seen.insert(e).second) {
          note(unique, "server " + std::to_string(s->id().value) + " repeats an element in epoch " + std::to_string(j));
        }
      }
    }
  }
  rep.results.push_back(std::move(unique));

  PropertyResult gets = property("consistent_gets");
  const Server* longest = nullptr;
  for (const Server* s : correct) {
    if (longest == nullptr || s->state()->epoch() > longest->state()->epoch()) longest = s;
  }
  auto sorted_bytes = [](const Epoch& g) {
    std::vector<const Bytes*> v;
    v.reserve(g.size());
    for (const Element& e : g) v.push_back(&e.canonical_bytes());
    std::sort(v.begin(), v.end(), [](const Bytes* a, const Bytes* b) { return *a < *b; });
    return v;
  };
  for (const Server* s : correct) {
    if (s == longest) continue;
    const SetchainState& a = *s->state();
    const SetchainState& b = *longest->state();
    for (std::uint64_t j = 1; j <= a.epoch(); ++j) {
      ++gets.checked;
      const auto x = sorted_bytes(*a.epoch_contents(j));
      const auto y = sorted_bytes(*b.epoch_contents(j));
      const bool same = x.size() == y.size() &&
                        std::equal(x.begin(), x.end(), y.begin(), [](const Bytes* p, const Bytes* q) { return *p == *q; });
      if (!same) {
        note(gets, "servers " + std::to_string(s->id().value) + " and " + std::to_string(longest->id().value) +
                       " differ at epoch " + std::to_string(j));
      }
    }
  }
  rep.results.push_back(std::move(gets));

  PropertyResult before = property("add_before_get");
  for (const Server* s : correct) {
    for (const Element& e : s->state()->the_set()) {
      ++before.checked;
      const auto id = id_of_.find(e);
      if (id == id_of_.end() || !trace_[id->second].submitted) {
        note(before, "server " + std::to_string(s->id().value) + " holds an element no client submitted");
      }
    }
  }
  rep.results.push_back(std::move(before));

  // Valid-Epoch: every epoch consolidated before the settle horizon, and
  // every non-empty epoch, needs f+1 distinct valid signers among the
  // proofs gathered by correct servers.
  PropertyResult valid = property("valid_epoch");
  PropertyResult clean = property("no_invalid_proofs");
  if (longest != nullptr) {
    const VirtualTime horizon = end - settle_window(cfg_);
    std::map<std::uint64_t, std::vector<EpochProof>> by_epoch;
    for (const Server* s : correct) {
      for (const EpochProof& p : s->state()->proofs()) by_epoch[p.epoch_no].push_back(p);
    }
    const SetchainState& st = *longest->state();
    for (std::uint64_t j = 1; j <= st.epoch(); ++j) {
      const auto track = epochs_.find(j);
      const bool early = track != epochs_.end() && track->second.known && track->second.consolidated_at <= horizon;
      if (!early && st.epoch_contents(j)->empty()) continue;
      ++valid.checked;
      const Digest& d = *st.epoch_digest_of(j);
      std::set<ProcessId> signers;
      for (const EpochProof& p : by_epoch[j]) {
        if (signers.size() > f) break;
        if (signers.contains(p.signer)) continue;
        if (valid_proof_digest(j, p.proof_sig, p.signer, &d, registry_)) signers.insert(p.signer);
      }
      if (signers.size() < f + 1) {
        note(valid, "epoch " + std::to_string(j) + " has " + std::to_string(signers.size()) + " valid signers");
      }
    }
    crypto::VerifyMemo memo;
    for (const Server* s : correct) {
      const SetchainState& own = *s->state();
      for (const EpochProof& p : own.proofs()) {
        ++clean.checked;
        const Digest* d = own.epoch_digest_of(p.epoch_no);
        const auto* entry = registry_.find(p.signer);
        const bool ok = d != nullptr && entry != nullptr && entry->role == Role::kServer &&
                        memo.verify(p.signer, entry->public_key, ByteView{d->data(), d->size()}, p.proof_sig);
        if (!ok) note(clean, "server " + std::to_string(s->id().value) + " kept an invalid proof");
      }
    }
  }
  rep.results.push_back(std::move(valid));
  rep.results.push_back(std::move(clean));

  if (opt_.algorithm == Algorithm::kHashchain) {
    PropertyResult quorum = property("consolidation_quorum");
    for (const Server* s : correct) {
      const auto* hs = dynamic_cast<const HashchainServer*>(s);
      for (const Digest& d : hs->consolidated()) {
        ++quorum.checked;
        const auto* signers = hs->signers(d);
        if (signers == nullptr || signers->size() < cfg_.quorum()) {
          note(quorum, "server " + std::to_string(s->id().value) + " consolidated below quorum");
        }
      }
    }
    rep.results.push_back(std::move(quorum));
  }

  PropertyResult ledger = property("ledger_9_11");
  const VirtualTime excuse = saturated ? VirtualTime::zero() : end - 2 * cfg_.block_interval() - cfg_.network_delay();
  const LedgerAudit audit = ledger_->audit(excuse);
  ledger.checked = audit.accepted_appends + ledger_->blocks().size();
  for (const auto& v : audit.violations) note(ledger, v);
  rep.results.push_back(std::move(ledger));

  PropertyResult conservation = property("conservation");
  for (const ElementTrace& t : trace_) {
    ++conservation.checked;
    if (!t.submitted) note(conservation, "element " + std::to_string(t.id) + " never submitted");
    if (t.t_commit && t.add_status != AddStatus::kAccepted) {
      note(conservation, "element " + std::to_string(t.id) + " committed without being accepted");
    }
  }
  rep.results.push_back(std::move(conservation));
  return rep;
}

}  // namespace

RunResult run(const RunOptions& options) {
  Simulation sim(options);
  return sim.run();
}

}  // namespace setchain
