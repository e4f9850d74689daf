#include <algorithm>

#include "seedaug/core/text.hpp"
#include "seedaug/local/augment_ops.hpp"

namespace seedaug {

Utterance infill(const Utterance& source, const NGramModel& model, std::size_t mask_count,
                 RandomStream& rng) {
  if (model.empty()) throw AugmentError(AugmentError::Kind::empty_model, "n-gram model is empty");
  auto tokens = tokenize(source.text).tokens;
  const std::size_t n = tokens.size();
  if (mask_count == 0 || mask_count >= n)
    throw AugmentError(AugmentError::Kind::mask_too_large,
                       "mask count " + std::to_string(mask_count) + " needs to be in [1, " +
                           std::to_string(n) + ")");

  std::vector<std::size_t> open(n);
  for (std::size_t i = 0; i < n; ++i) open[i] = i;
  std::vector<bool> masked(n, false);
  for (std::size_t k = 0; k < mask_count; ++k) {
    std::size_t pick = rng.below(open.size());
    masked[open[pick]] = true;
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
  }

  for (std::size_t p = 0; p < n; ++p) {
    if (!masked[p]) continue;
    const std::string* left = p > 0 ? &tokens[p - 1] : nullptr;
    const std::string* right = (p + 1 < n && !masked[p + 1]) ? &tokens[p + 1] : nullptr;

    const std::string* best = nullptr;
    std::size_t best_score = 0;
    for (const auto& w : model.vocab()) {  // lexicographic, so first max wins ties
      std::size_t score = (left ? model.bigram(*left, w) : 0) + (right ? model.bigram(w, *right) : 0);
      if (score > best_score) {
        best = &w;
        best_score = score;
      }
    }
    tokens[p] = best ? *best : model.most_frequent();
    masked[p] = false;
  }
  return Utterance::derived(source, join_tokens(tokens), MethodId::infill);
}

}  // namespace seedaug
