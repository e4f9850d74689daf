#include "seedaug/mixing/mixing.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace seedaug {

void MethodScoreTable::validate() const {
  for (MethodId m : kSingleMethods) {
    auto it = accuracy.find(m);
    if (it == accuracy.end()) throw MixError("score table lacks " + std::string(to_string(m)));
    if (!(it->second >= 0.0 && it->second <= 100.0))
      throw MixError("score for " + std::string(to_string(m)) + " is outside [0, 100]");
  }
  for (const auto& [m, v] : accuracy) {
    if (!is_single_method(m)) throw MixError("score table may only list single methods");
  }
}

MethodScoreTable MethodScoreTable::parse(std::string_view json_text) {
  auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("accuracy") || !j["accuracy"].is_object())
    throw MixError("score table must look like {\"accuracy\": {...}}");
  MethodScoreTable t;
  for (const auto& [name, value] : j["accuracy"].items()) {
    auto m = parse_method(name);
    if (!m) throw MixError("unknown method in score table: " + name);
    if (!value.is_number()) throw MixError("score for " + name + " is not a number");
    t.accuracy[*m] = value.get<double>();
  }
  t.validate();
  return t;
}

MethodScoreTable MethodScoreTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MixError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

MethodId MixPlan::assign_slot(std::size_t, RandomStream& rng) const {
  if (members.size() == 1) return members.front();
  return members[rng.below(members.size())];
}

const std::vector<MethodId>& default_category_best() {
  static const std::vector<MethodId> members = {MethodId::eda, MethodId::paraphrase, MethodId::typo,
                                                MethodId::lm_decode};
  return members;
}

MixPlan build_mix_plan(MethodId strategy, const MethodScoreTable* scores,
                       std::optional<std::vector<MethodId>> members) {
  MixPlan plan;
  plan.strategy = strategy;
  switch (strategy) {
    case MethodId::top4: {
      if (!scores) throw MixError("top4 needs a score table");
      scores->validate();
      std::vector<std::pair<MethodId, double>> ranked(scores->accuracy.begin(), scores->accuracy.end());
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return to_string(a.first) < to_string(b.first);
      });
      for (std::size_t i = 0; i < 4 && i < ranked.size(); ++i) plan.members.push_back(ranked[i].first);
      break;
    }
    case MethodId::category_best:
      plan.members = members ? *members : default_category_best();
      break;
    case MethodId::heuristic:
      plan.members = {MethodId::paraphrase, MethodId::lm_decode, MethodId::typo};
      break;
    case MethodId::mix_all:
      plan.members.assign(kSingleMethods.begin(), kSingleMethods.end());
      break;
    default:
      throw MixError(std::string(to_string(strategy)) + " is not a mixing strategy");
  }
  if (plan.members.empty()) throw MixError("mix plan has no members");
  for (MethodId m : plan.members) {
    if (!is_single_method(m)) throw MixError("mix members must be single methods");
  }
  return plan;
}

namespace {

const Augmenter& require(const AugmenterSet& set, MethodId m) {
  auto it = set.find(m);
  if (it == set.end() || !it->second) throw MixError("no augmenter available for " + std::string(to_string(m)));
  return *it->second;
}

}  // namespace

IntentRunState heuristic_chain(const std::string& intent, std::span<const Utterance> seeds,
                               const AugmenterSet& augmenters, const PipelineConfig& config, RandomStream& rng) {
  const Augmenter& paraphrase = require(augmenters, MethodId::paraphrase);
  const Augmenter& lm = require(augmenters, MethodId::lm_decode);
  const Augmenter& typo = require(augmenters, MethodId::typo);

  const std::size_t first_half = (config.per_intent_quota + 1) / 2;
  const std::size_t second_half = config.per_intent_quota / 2;

  IntentSession session(intent, seeds, config);
  auto how = session.run_until(
      first_half,
      [&](std::size_t round, RandomStream&) -> const Augmenter& { return round % 2 == 0 ? paraphrase : lm; }, {},
      rng, MethodId::heuristic);

  const auto phase_one = session.accepted_utterances();
  if (phase_one.empty() || second_half == 0) return std::move(session).finish(how);

  session.reset_duplicates();
  how = session.run_until(
      session.accepted_count() + second_half, [&](std::size_t, RandomStream&) -> const Augmenter& { return typo; },
      phase_one, rng, MethodId::heuristic);
  return std::move(session).finish(how);
}

DomainResult mixed_augment(const SeedSet& seeds, const MixPlan& plan, const AugmenterSet& augmenters,
                           const PipelineConfig& config) {
  if (plan.strategy == MethodId::heuristic) {
    return run_domain(seeds, config, [&](const std::string& intent, std::span<const Utterance> list, RandomStream& rng) {
      return heuristic_chain(intent, list, augmenters, config, rng);
    });
  }
  for (MethodId m : plan.members) require(augmenters, m);
  return run_domain(seeds, config, [&](const std::string& intent, std::span<const Utterance> list, RandomStream& rng) {
    IntentSession session(intent, list, config);
    auto how = session.run_until(
        config.per_intent_quota,
        [&](std::size_t slot, RandomStream& r) -> const Augmenter& {
          return *augmenters.at(plan.assign_slot(slot, r));
        },
        {}, rng, plan.strategy);
    return std::move(session).finish(how);
  });
}

}  // namespace seedaug
