#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "seedaug/core/method.hpp"

namespace seedaug {

enum class ReviewDecision { accept, reject };

std::string_view to_string(ReviewDecision d);
std::optional<ReviewDecision> parse_decision(std::string_view s);

// A labeled text sample. Seeds have an empty provenance; every derived
// utterance records the chain of methods that produced it.
struct Utterance {
  std::string text;
  std::string intent;
  std::vector<MethodId> provenance;
  std::optional<std::string> source_text;

  static Utterance seed(std::string text, std::string intent);

  // New utterance produced from `source` by `method`.
  static Utterance derived(const Utterance& source, std::string text, MethodId method);

  // Utterance produced from nothing but the intent (LM decoding, retrieval).
  static Utterance generated(std::string text, std::string intent, MethodId method,
                             std::optional<std::string> source_text = std::nullopt);

  bool is_seed() const { return provenance.empty(); }

  // Throws std::invalid_argument when an invariant does not hold.
  void validate() const;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

// Seed utterances grouped by intent. std::map keeps iteration order stable,
// which the pipeline relies on for reproducible output.
struct SeedSet {
  std::map<std::string, std::vector<Utterance>> intents;

  std::size_t utterance_count() const;
  void validate() const;
};

struct AugmentationRecord {
  std::string id;
  Utterance utterance;
  MethodId method = MethodId::eda;
  std::size_t round_index = 0;
  // Set on outputs of a mixing strategy; single-method runs leave it empty.
  std::optional<MethodId> strategy;
  std::optional<ReviewDecision> review;

  void validate() const;

  friend bool operator==(const AugmentationRecord&, const AugmentationRecord&) = default;
};

}  // namespace seedaug
