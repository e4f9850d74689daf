#include "seedaug/pipeline/local_augmenters.hpp"

#include <algorithm>

namespace seedaug {

std::vector<Utterance> EdaAugmenter::generate(const RoundInput& in, RandomStream& rng) const {
  std::vector<Utterance> out;
  for (EdaOp op : {EdaOp::insert, EdaOp::remove, EdaOp::swap}) {
    try {
      out.push_back(eda_augment(in.source, op, rng));
    } catch (const AugmentError& e) {
      if (e.kind() != AugmentError::Kind::not_enough_tokens) throw;
    }
  }
  if (out.empty())
    throw AugmentError(AugmentError::Kind::not_enough_tokens, "no EDA edit applies to \"" + in.source.text + "\"");
  return out;
}

std::vector<Utterance> SynonymAugmenter::generate(const RoundInput& in, RandomStream& rng) const {
  std::vector<Utterance> out;
  for (std::size_t i = 0; i < in.count; ++i) out.push_back(synonym_replace(in.source, *lexicon_, *thesaurus_, rng));
  return out;
}

std::vector<Utterance> InfillAugmenter::generate(const RoundInput& in, RandomStream& rng) const {
  std::vector<Utterance> out;
  for (std::size_t i = 0; i < in.count; ++i) out.push_back(infill(in.source, *model_, mask_count_, rng));
  return out;
}

std::vector<Utterance> TypoAugmenter::generate(const RoundInput& in, RandomStream& rng) const {
  const std::size_t edits = edit_count_ ? edit_count_ : default_typo_edit_count(in.source.text);
  std::vector<Utterance> out;
  for (std::size_t i = 0; i < in.count; ++i) out.push_back(typo_generate(in.source, *keyboard_, edits, rng));
  return out;
}

std::vector<Utterance> KnnAugmenter::generate(const RoundInput& in, RandomStream&) const {
  const std::size_t visit = in.round_index / std::max<std::size_t>(in.seeds.size(), 1);
  const std::size_t begin = visit * in.count;
  if (begin >= pool_->size()) return {};
  const std::size_t end = std::min(begin + in.count, pool_->size());

  auto hits = knn_retrieve(in.source, *pool_, *table_, end);
  return {std::make_move_iterator(hits.begin() + static_cast<std::ptrdiff_t>(begin)),
          std::make_move_iterator(hits.end())};
}

}  // namespace seedaug
