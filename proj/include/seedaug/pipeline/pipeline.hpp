#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedaug/core/random.hpp"
#include "seedaug/core/text.hpp"
#include "seedaug/core/types.hpp"
#include "seedaug/metrics/bleu.hpp"
#include "seedaug/pipeline/augmenter.hpp"

namespace seedaug {

struct PipelineConfig {
  std::size_t per_intent_quota = 50;
  std::size_t candidates_per_round = 3;
  std::size_t retry_limit = 10;
  std::uint64_t rng_seed = 0;
  std::size_t workers = 1;  // concurrent intents; does not affect output

  void validate() const;
};

enum class Termination { quota, retries, error };

std::string_view to_string(Termination t);

struct IntentRunState {
  std::string intent;
  std::vector<AugmentationRecord> accepted;
  std::size_t duplicate_count = 0;
  std::size_t rounds_executed = 0;
  Termination terminated_by = Termination::quota;
  std::optional<std::string> error;
};

// Candidates for one round. The source is sources[round_index % size].
// Any augmenter exception becomes an empty list (a failed round); blank
// candidates are dropped.
std::vector<Utterance> generate_round(const Augmenter& augmenter, std::string_view intent,
                                      std::span<const Utterance> seeds, std::span<const Utterance> sources,
                                      std::size_t round_index, std::size_t count, RandomStream& rng);

inline std::vector<Utterance> generate_round(const Augmenter& augmenter, std::string_view intent,
                                             std::span<const Utterance> seeds, std::size_t round_index,
                                             std::size_t count, RandomStream& rng) {
  return generate_round(augmenter, intent, seeds, seeds, round_index, count, rng);
}

// Index of the candidate with the lowest BLEU against the references;
// the first such candidate on ties. `candidates` must be non-empty.
std::size_t rank_by_diversity(std::span<const Utterance> candidates, const BleuReferenceSet& references);
const Utterance& rank_by_diversity(std::span<const Utterance> candidates,
                                   std::span<const std::string> references, const BleuConfig& cfg = {});

// Per-intent generation state: accepted records, the dedup set (seeds plus
// accepted) and the BLEU references (also seeds plus accepted).
class IntentSession {
 public:
  enum class Outcome { accepted, duplicate, failed };

  IntentSession(std::string intent, std::span<const Utterance> seeds, const PipelineConfig& cfg,
                BleuConfig bleu = {});

  // generate -> rank -> dedup. `sources` defaults to the seeds when empty;
  // `source_round` picks the source round-robin.
  Outcome run_round(const Augmenter& augmenter, std::span<const Utterance> sources, std::size_t source_round,
                    RandomStream& rng, std::optional<MethodId> strategy = std::nullopt);

  // Runs rounds until `target` records are accepted in total or the
  // duplicate budget is spent. `pick` chooses the augmenter per round and
  // receives the phase-local round number.
  Termination run_until(std::size_t target, const std::function<const Augmenter&(std::size_t, RandomStream&)>& pick,
                        std::span<const Utterance> sources, RandomStream& rng,
                        std::optional<MethodId> strategy = std::nullopt);

  std::size_t accepted_count() const { return accepted_.size(); }
  std::size_t duplicate_count() const { return duplicates_; }
  std::size_t rounds_executed() const { return rounds_; }
  // Gives a new phase its own duplicate budget.
  void reset_duplicates() { duplicates_ = 0; }

  const std::vector<AugmentationRecord>& accepted() const { return accepted_; }
  std::vector<Utterance> accepted_utterances() const;
  std::span<const Utterance> seeds() const { return seeds_; }
  const PipelineConfig& config() const { return cfg_; }

  IntentRunState finish(Termination how) &&;

 private:
  std::string intent_;
  std::span<const Utterance> seeds_;
  PipelineConfig cfg_;
  DedupSet seen_;
  BleuReferenceSet references_;
  std::vector<AugmentationRecord> accepted_;
  std::size_t duplicates_ = 0;
  std::size_t rounds_ = 0;
};

IntentRunState augment_intent(const std::string& intent, std::span<const Utterance> seeds,
                              const Augmenter& augmenter, const PipelineConfig& config, RandomStream& rng);

struct RunSummary {
  struct Entry {
    std::string intent;
    std::size_t accepted = 0;
    std::size_t duplicates = 0;
    std::size_t rounds = 0;
    Termination terminated_by = Termination::quota;
    std::optional<std::string> error;
  };
  std::vector<Entry> intents;
  std::size_t seed_count = 0;

  std::size_t total_accepted() const;
  std::size_t total_duplicates() const;
  std::size_t total_rounds() const;
  std::size_t training_examples() const { return total_accepted() + seed_count; }
};

std::string summary_to_json(const RunSummary& summary);

struct DomainResult {
  std::vector<AugmentationRecord> records;  // by intent, then acceptance order
  RunSummary summary;
};

// Produces one intent's run given its seeds and its private stream.
using IntentRunner =
    std::function<IntentRunState(const std::string& intent, std::span<const Utterance> seeds, RandomStream& rng)>;

// Runs every intent, up to config.workers at a time. Each intent's stream
// is seeded from (config.rng_seed, intent), so output does not depend on
// scheduling. An intent that throws is recorded in the summary and the
// remaining intents still run.
DomainResult run_domain(const SeedSet& seeds, const PipelineConfig& config, const IntentRunner& runner);

DomainResult augment_domain(const SeedSet& seeds, const Augmenter& augmenter, const PipelineConfig& config);

}  // namespace seedaug
