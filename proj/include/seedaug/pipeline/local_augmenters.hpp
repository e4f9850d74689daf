#pragma once

#include <memory>

#include "seedaug/local/augment_ops.hpp"
#include "seedaug/pipeline/augmenter.hpp"

namespace seedaug {

// One insertion, one deletion and one swap per round, whatever `count` is.
// Edits that do not apply to a short source are skipped.
class EdaAugmenter final : public Augmenter {
 public:
  MethodId method() const override { return MethodId::eda; }
  std::vector<Utterance> generate(const RoundInput& in, RandomStream& rng) const override;
};

class SynonymAugmenter final : public Augmenter {
 public:
  SynonymAugmenter(std::shared_ptr<const PosLexicon> lexicon, std::shared_ptr<const Thesaurus> thesaurus)
      : lexicon_(std::move(lexicon)), thesaurus_(std::move(thesaurus)) {}
  MethodId method() const override { return MethodId::synonym; }
  std::vector<Utterance> generate(const RoundInput& in, RandomStream& rng) const override;

 private:
  std::shared_ptr<const PosLexicon> lexicon_;
  std::shared_ptr<const Thesaurus> thesaurus_;
};

class InfillAugmenter final : public Augmenter {
 public:
  explicit InfillAugmenter(std::shared_ptr<const NGramModel> model, std::size_t mask_count = 1)
      : model_(std::move(model)), mask_count_(mask_count) {}
  MethodId method() const override { return MethodId::infill; }
  std::vector<Utterance> generate(const RoundInput& in, RandomStream& rng) const override;

 private:
  std::shared_ptr<const NGramModel> model_;
  std::size_t mask_count_;
};

// edit_count == 0 means default_typo_edit_count() of each source.
class TypoAugmenter final : public Augmenter {
 public:
  explicit TypoAugmenter(std::size_t edit_count = 0, const KeyboardMap& keyboard = KeyboardMap::qwerty())
      : keyboard_(&keyboard), edit_count_(edit_count) {}
  MethodId method() const override { return MethodId::typo; }
  std::vector<Utterance> generate(const RoundInput& in, RandomStream& rng) const override;

 private:
  const KeyboardMap* keyboard_;
  std::size_t edit_count_;
};

// Walks outward through the source's neighbours: the v-th visit to a seed
// (v = round_index / seed count) returns neighbours [v * count, (v + 1) * count).
// Rounds past the end of the pool come back empty.
class KnnAugmenter final : public Augmenter {
 public:
  KnnAugmenter(std::shared_ptr<const CandidatePool> pool, std::shared_ptr<const EmbeddingTable> table)
      : pool_(std::move(pool)), table_(std::move(table)) {}
  MethodId method() const override { return MethodId::knn; }
  std::vector<Utterance> generate(const RoundInput& in, RandomStream& rng) const override;

 private:
  std::shared_ptr<const CandidatePool> pool_;
  std::shared_ptr<const EmbeddingTable> table_;
};

}  // namespace seedaug
