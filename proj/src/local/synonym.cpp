#include "seedaug/core/text.hpp"
#include "seedaug/local/augment_ops.hpp"

namespace seedaug {

Utterance synonym_replace(const Utterance& source, const PosLexicon& lexicon,
                          const Thesaurus& thesaurus, RandomStream& rng) {
  auto tokens = tokenize(source.text).tokens;
  if (tokens.empty())
    throw AugmentError(AugmentError::Kind::not_enough_tokens, "synonym replacement on empty text");

  struct Slot {
    std::size_t position;
    std::span<const std::string> synonyms;
  };
  std::vector<Slot> eligible;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    PosTag tag = lexicon.tag(tokens[i]);
    if (!is_content_tag(tag)) continue;
    auto syns = thesaurus.lookup(tokens[i], tag);
    if (!syns.empty()) eligible.push_back({i, syns});
  }
  if (eligible.empty())
    throw AugmentError(AugmentError::Kind::no_eligible_tokens,
                       "no noun/verb/adjective with a synonym in \"" + source.text + "\"");

  const Slot& slot = eligible[rng.below(eligible.size())];
  tokens[slot.position] = slot.synonyms[rng.below(slot.synonyms.size())];
  return Utterance::derived(source, join_tokens(tokens), MethodId::synonym);
}

}  // namespace seedaug
