#include "seedaug/core/types.hpp"

#include <stdexcept>

#include "seedaug/core/text.hpp"

namespace seedaug {

std::string_view to_string(ReviewDecision d) {
  return d == ReviewDecision::accept ? "accept" : "reject";
}

std::optional<ReviewDecision> parse_decision(std::string_view s) {
  if (s == "accept") return ReviewDecision::accept;
  if (s == "reject") return ReviewDecision::reject;
  return std::nullopt;
}

Utterance Utterance::seed(std::string text, std::string intent) {
  Utterance u;
  u.text = std::move(text);
  u.intent = std::move(intent);
  return u;
}

Utterance Utterance::derived(const Utterance& source, std::string text, MethodId method) {
  Utterance u;
  u.text = std::move(text);
  u.intent = source.intent;
  u.provenance = source.provenance;
  u.provenance.push_back(method);
  u.source_text = source.text;
  return u;
}

Utterance Utterance::generated(std::string text, std::string intent, MethodId method,
                               std::optional<std::string> source_text) {
  Utterance u;
  u.text = std::move(text);
  u.intent = std::move(intent);
  u.provenance.push_back(method);
  u.source_text = std::move(source_text);
  return u;
}

void Utterance::validate() const {
  if (normalize(text).empty()) throw std::invalid_argument("utterance text is empty");
  if (intent.empty()) throw std::invalid_argument("utterance has no intent");
}

std::size_t SeedSet::utterance_count() const {
  std::size_t n = 0;
  for (const auto& [intent, seeds] : intents) n += seeds.size();
  return n;
}

void SeedSet::validate() const {
  for (const auto& [intent, seeds] : intents) {
    if (seeds.empty()) throw std::invalid_argument("intent has no seeds: " + intent);
    DedupSet seen;
    for (const auto& s : seeds) {
      s.validate();
      if (!s.is_seed()) throw std::invalid_argument("seed carries provenance: " + s.text);
      if (s.intent != intent) throw std::invalid_argument("seed filed under wrong intent: " + s.text);
      if (!seen.insert(s.text)) throw std::invalid_argument("duplicate seed: " + s.text);
    }
  }
}

void AugmentationRecord::validate() const {
  utterance.validate();
  if (utterance.provenance.empty()) throw std::invalid_argument("record " + id + " has no provenance");
  if (utterance.provenance.back() != method)
    throw std::invalid_argument("record " + id + " method differs from provenance tail");
  if (id.empty()) throw std::invalid_argument("record without id");
}

}  // namespace seedaug
