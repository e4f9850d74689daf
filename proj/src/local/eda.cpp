#include <utility>

#include "seedaug/core/text.hpp"
#include "seedaug/local/augment_ops.hpp"

namespace seedaug {

std::string_view to_string(EdaOp op) {
  switch (op) {
    case EdaOp::insert: return "insert";
    case EdaOp::remove: return "delete";
    case EdaOp::swap: return "swap";
  }
  return "unknown";
}

Utterance eda_augment(const Utterance& source, EdaOp op, RandomStream& rng) {
  auto tokens = tokenize(source.text).tokens;
  const std::size_t n = tokens.size();
  const std::size_t needed = op == EdaOp::insert ? 1 : 2;
  if (n < needed)
    throw AugmentError(AugmentError::Kind::not_enough_tokens,
                       "eda " + std::string(to_string(op)) + " needs " + std::to_string(needed) +
                           " tokens, got " + std::to_string(n));

  switch (op) {
    case EdaOp::swap: {
      std::size_t first = rng.below(n);
      std::size_t second = rng.below(n - 1);
      if (second >= first) ++second;
      std::swap(tokens[first], tokens[second]);
      break;
    }
    case EdaOp::remove:
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(rng.below(n)));
      break;
    case EdaOp::insert: {
      std::string copy = tokens[rng.below(n)];
      std::size_t slot = rng.below(n + 1);
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(slot), std::move(copy));
      break;
    }
  }
  return Utterance::derived(source, join_tokens(tokens), MethodId::eda);
}

}  // namespace seedaug
