#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seedaug/core/error.hpp"
#include "seedaug/pipeline/pipeline.hpp"

namespace seedaug {

class MixError : public Error {
 public:
  using Error::Error;
};

// Downstream accuracy (percent) per single method, from an evaluation run.
// JSON file: {"accuracy": {"eda": 72.5, ...}}.
struct MethodScoreTable {
  std::map<MethodId, double> accuracy;

  // Every single method present, values within [0, 100].
  void validate() const;

  static MethodScoreTable parse(std::string_view json_text);
  static MethodScoreTable load(const std::filesystem::path& path);
};

// Which single methods a mixing strategy draws from.
struct MixPlan {
  MethodId strategy = MethodId::mix_all;
  std::vector<MethodId> members;

  // Uniform over members. A single-member plan draws nothing, so it
  // reproduces a plain run of that method exactly.
  MethodId assign_slot(std::size_t slot, RandomStream& rng) const;
};

// The default Category Best members: the stronger method of each category.
const std::vector<MethodId>& default_category_best();

// top4 needs `scores` (MixError otherwise). category_best may be override
// by `members`. heuristic lists the three methods heuristic_chain uses.
MixPlan build_mix_plan(MethodId strategy, const MethodScoreTable* scores = nullptr,
                       std::optional<std::vector<MethodId>> members = std::nullopt);

using AugmenterSet = std::map<MethodId, const Augmenter*>;

// Half the quota (rounded up) from paraphrase and lm_decode alternating,
// then the other half by typo generation applied to those outputs in
// acceptance order. Each phase has its own duplicate budget.
IntentRunState heuristic_chain(const std::string& intent, std::span<const Utterance> seeds,
                               const AugmenterSet& augmenters, const PipelineConfig& config, RandomStream& rng);

// Runs the plan over every intent; dedup and quota work as in a plain run.
DomainResult mixed_augment(const SeedSet& seeds, const MixPlan& plan, const AugmenterSet& augmenters,
                           const PipelineConfig& config);

}  // namespace seedaug
