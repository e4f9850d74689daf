#pragma once

#include "seedaug/core/text.hpp"

namespace seedaug {

struct MtldConfig {
  double ttr_threshold = 0.72;
};

// Measure of Textual Lexical Diversity: the mean of a forward and a
// backward pass. Each pass counts a factor whenever the running type/token
// ratio of the current segment falls below the threshold, adds a partial
// factor (1 - ttr) / (1 - threshold) for a non-empty trailing segment, and
// divides the token count by the factor total. A pass with zero factors
// yields the token count. Empty input yields 0.
double mtld(const TokenSequence& tokens, const MtldConfig& cfg = {});

}  // namespace seedaug
