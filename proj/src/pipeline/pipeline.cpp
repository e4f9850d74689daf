#include "seedaug/pipeline/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace seedaug {

void PipelineConfig::validate() const {
  if (per_intent_quota < 1) throw std::invalid_argument("per-intent quota must be >= 1");
  if (candidates_per_round < 1) throw std::invalid_argument("candidates per round must be >= 1");
  if (retry_limit < 1) throw std::invalid_argument("retry limit must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::quota: return "quota";
    case Termination::retries: return "retries";
    case Termination::error: return "error";
  }
  return "unknown";
}

std::vector<Utterance> generate_round(const Augmenter& augmenter, std::string_view intent,
                                      std::span<const Utterance> seeds, std::span<const Utterance> sources,
                                      std::size_t round_index, std::size_t count, RandomStream& rng) {
  if (sources.empty()) return {};
  RoundInput in{intent, sources[round_index % sources.size()], seeds, round_index, count};
  std::vector<Utterance> out;
  try {
    out = augmenter.generate(in, rng);
  } catch (const std::exception&) {
    return {};
  }
  std::erase_if(out, [](const Utterance& u) { return tokenize(u.text).empty(); });
  return out;
}

std::size_t rank_by_diversity(std::span<const Utterance> candidates, const BleuReferenceSet& references) {
  if (candidates.empty()) throw std::invalid_argument("rank_by_diversity needs candidates");
  std::size_t best = 0;
  double best_score = references.score(tokenize(candidates[0].text));
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    double s = references.score(tokenize(candidates[i].text));
    if (s < best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

const Utterance& rank_by_diversity(std::span<const Utterance> candidates, std::span<const std::string> references,
                                   const BleuConfig& cfg) {
  BleuReferenceSet set(cfg);
  for (const auto& r : references) set.add(tokenize(r));
  return candidates[rank_by_diversity(candidates, set)];
}

// ---- IntentSession ----

IntentSession::IntentSession(std::string intent, std::span<const Utterance> seeds, const PipelineConfig& cfg,
                             BleuConfig bleu)
    : intent_(std::move(intent)), seeds_(seeds), cfg_(cfg), references_(bleu) {
  cfg_.validate();
  if (seeds_.empty()) throw std::invalid_argument("intent " + intent_ + " has no seeds");
  for (const auto& s : seeds_) {
    seen_.insert(s.text);
    references_.add(tokenize(s.text));
  }
}

IntentSession::Outcome IntentSession::run_round(const Augmenter& augmenter, std::span<const Utterance> sources,
                                                std::size_t source_round, RandomStream& rng,
                                                std::optional<MethodId> strategy) {
  if (sources.empty()) sources = seeds_;
  const std::size_t round = rounds_++;
  auto candidates =
      generate_round(augmenter, intent_, seeds_, sources, source_round, cfg_.candidates_per_round, rng);
  if (candidates.empty()) {
    ++duplicates_;
    return Outcome::failed;
  }
  Utterance& winner = candidates[rank_by_diversity(candidates, references_)];
  if (is_duplicate(winner, seen_)) {
    ++duplicates_;
    return Outcome::duplicate;
  }

  seen_.insert(winner.text);
  references_.add(tokenize(winner.text));
  AugmentationRecord rec;
  char id[32];
  std::snprintf(id, sizeof id, "#%04zu", accepted_.size() + 1);
  rec.id = intent_ + id;
  rec.method = winner.provenance.empty() ? augmenter.method() : winner.provenance.back();
  if (winner.provenance.empty()) winner.provenance.push_back(rec.method);
  winner.intent = intent_;
  rec.utterance = std::move(winner);
  rec.round_index = round;
  rec.strategy = strategy;
  accepted_.push_back(std::move(rec));
  return Outcome::accepted;
}

Termination IntentSession::run_until(std::size_t target,
                                     const std::function<const Augmenter&(std::size_t, RandomStream&)>& pick,
                                     std::span<const Utterance> sources, RandomStream& rng,
                                     std::optional<MethodId> strategy) {
  for (std::size_t local = 0;; ++local) {
    if (accepted_.size() >= target) return Termination::quota;
    if (duplicates_ >= cfg_.retry_limit) return Termination::retries;
    const Augmenter& aug = pick(local, rng);
    run_round(aug, sources, local, rng, strategy);
  }
}

std::vector<Utterance> IntentSession::accepted_utterances() const {
  std::vector<Utterance> out;
  out.reserve(accepted_.size());
  for (const auto& r : accepted_) out.push_back(r.utterance);
  return out;
}

IntentRunState IntentSession::finish(Termination how) && {
  IntentRunState st;
  st.intent = std::move(intent_);
  st.accepted = std::move(accepted_);
  st.duplicate_count = duplicates_;
  st.rounds_executed = rounds_;
  st.terminated_by = how;
  return st;
}

IntentRunState augment_intent(const std::string& intent, std::span<const Utterance> seeds,
                              const Augmenter& augmenter, const PipelineConfig& config, RandomStream& rng) {
  IntentSession session(intent, seeds, config);
  auto how = session.run_until(
      config.per_intent_quota, [&](std::size_t, RandomStream&) -> const Augmenter& { return augmenter; }, {}, rng);
  return std::move(session).finish(how);
}

// ---- RunSummary ----

std::size_t RunSummary::total_accepted() const {
  std::size_t n = 0;
  for (const auto& e : intents) n += e.accepted;
  return n;
}

std::size_t RunSummary::total_duplicates() const {
  std::size_t n = 0;
  for (const auto& e : intents) n += e.duplicates;
  return n;
}

std::size_t RunSummary::total_rounds() const {
  std::size_t n = 0;
  for (const auto& e : intents) n += e.rounds;
  return n;
}

std::string summary_to_json(const RunSummary& summary) {
  using json = nlohmann::ordered_json;
  json intents = json::array();
  for (const auto& e : summary.intents) {
    json j;
    j["intent"] = e.intent;
    j["accepted"] = e.accepted;
    j["duplicates"] = e.duplicates;
    j["rounds"] = e.rounds;
    j["terminated_by"] = to_string(e.terminated_by);
    if (e.error) j["error"] = *e.error;
    intents.push_back(std::move(j));
  }
  json out;
  out["intents"] = std::move(intents);
  out["totals"] = {{"intents", summary.intents.size()},
                   {"accepted", summary.total_accepted()},
                   {"duplicates", summary.total_duplicates()},
                   {"rounds", summary.total_rounds()},
                   {"seeds", summary.seed_count},
                   {"training_examples", summary.training_examples()}};
  return out.dump(2) + "\n";
}

// ---- domain ----

DomainResult run_domain(const SeedSet& seeds, const PipelineConfig& config, const IntentRunner& runner) {
  config.validate();
  seeds.validate();

  std::vector<const std::pair<const std::string, std::vector<Utterance>>*> work;
  for (const auto& entry : seeds.intents) work.push_back(&entry);
  std::vector<IntentRunState> results(work.size());

  auto run_one = [&](std::size_t i) {
    const auto& [intent, list] = *work[i];
    SeededStream rng(derive_seed(config.rng_seed, intent));
    try {
      results[i] = runner(intent, list, rng);
      results[i].intent = intent;
    } catch (const std::exception& e) {
      results[i] = IntentRunState{};
      results[i].intent = intent;
      results[i].terminated_by = Termination::error;
      results[i].error = e.what();
    }
  };

  const std::size_t threads = std::min(config.workers, work.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < work.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < work.size(); i = next++) run_one(i);
      });
    }
  }

  DomainResult out;
  out.summary.seed_count = seeds.utterance_count();
  for (auto& st : results) {
    out.summary.intents.push_back(
        {st.intent, st.accepted.size(), st.duplicate_count, st.rounds_executed, st.terminated_by, st.error});
    for (auto& r : st.accepted) out.records.push_back(std::move(r));
  }
  return out;
}

DomainResult augment_domain(const SeedSet& seeds, const Augmenter& augmenter, const PipelineConfig& config) {
  return run_domain(seeds, config, [&](const std::string& intent, std::span<const Utterance> list, RandomStream& rng) {
    return augment_intent(intent, list, augmenter, config, rng);
  });
}

}  // namespace seedaug
