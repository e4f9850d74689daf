#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "seedaug/core/text.hpp"

namespace seedaug {

// Smoothed sentence-level BLEU.
//
//   p_n  clipped n-gram precision, clip = max count over references.
//        For n >= 2 an order with no matches becomes 1 / (total_n + 1)
//        instead of zero; p_1 = 0 makes the score 0.
//   BP   exp(1 - r / c) when the candidate length c is below r, the
//        closest reference length (shorter one on ties).
//   BLEU BP * exp(sum_n ln(p_n) / max_n)
struct BleuConfig {
  std::size_t max_n = 4;
};

// Clipping counts and lengths of a growing reference set. Adding a
// reference costs one pass over its n-grams; scoring never rescans the set.
class BleuReferenceSet {
 public:
  explicit BleuReferenceSet(BleuConfig cfg = {});

  void add(const TokenSequence& reference);
  std::size_t size() const { return count_; }

  // Throws MetricsError(empty_input) for an empty candidate or set.
  double score(const TokenSequence& candidate) const;

 private:
  std::size_t closest_length(std::size_t c) const;

  BleuConfig cfg_;
  std::vector<std::unordered_map<std::string, std::size_t>> max_counts_;  // per order
  std::multiset<std::size_t> lengths_;
  std::size_t count_ = 0;
};

double sentence_bleu(const TokenSequence& candidate, std::span<const TokenSequence> references,
                     const BleuConfig& cfg = {});

}  // namespace seedaug
