#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedaug/core/error.hpp"
#include "seedaug/core/random.hpp"
#include "seedaug/core/types.hpp"
#include "seedaug/local/resources.hpp"

namespace seedaug {

class AugmentError : public Error {
 public:
  enum class Kind {
    not_enough_tokens,
    no_eligible_tokens,
    mask_too_large,
    empty_model,
    no_alphabetic_content,
    k_too_large,
    empty_pool,
  };

  AugmentError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// ---- EDA ----

enum class EdaOp { insert, remove, swap };

std::string_view to_string(EdaOp op);

// Token-level edit of `source`. Draw order on `rng`:
//   swap:   first = below(n), second = below(n - 1) (shifted past first)
//   remove: position = below(n)
//   insert: token = below(n), then slot = below(n + 1)
// Insertion copies an existing token, so no lexicon is involved.
Utterance eda_augment(const Utterance& source, EdaOp op, RandomStream& rng);

// ---- synonym replacement ----

// Replaces one noun/verb/adjective that has a thesaurus entry. Draws the
// position among eligible tokens first, then the synonym.
Utterance synonym_replace(const Utterance& source, const PosLexicon& lexicon,
                          const Thesaurus& thesaurus, RandomStream& rng);

// ---- in-filling ----

// Masks `mask_count` distinct positions (drawn one at a time from the
// remaining unmasked positions) and refills them left to right with the
// vocabulary word maximizing count(left, w) + count(w, right). A neighbour
// that is still masked contributes nothing. Ties go to the lexicographically
// smallest word; an all-zero score falls back to the most frequent unigram.
Utterance infill(const Utterance& source, const NGramModel& model, std::size_t mask_count,
                 RandomStream& rng);

// ---- typos ----

enum class TypoEdit { substitute, remove, transpose, duplicate };

// max(1, round(0.05 * character length))
std::size_t default_typo_edit_count(std::string_view text);

// Applies `edit_count` character edits. Each edit draws its kind with
// below(4) and then a position among the characters eligible for that kind;
// substitution additionally draws a neighbouring key. A kind with no
// eligible position falls back to substitution. If the edits happen to
// cancel out, the whole sequence is redrawn.
Utterance typo_generate(const Utterance& source, const KeyboardMap& keyboard,
                        std::size_t edit_count, RandomStream& rng);

// ---- retrieval ----

// Mean of the in-vocabulary token vectors; zero vector when none match.
std::vector<double> embed_bow(std::string_view text, const EmbeddingTable& table);

struct Neighbour {
  std::size_t index;
  double distance;  // Euclidean
};

// Exhaustive scan: the k rows closest to `query`, by ascending distance,
// ties broken by lower pool index.
std::vector<Neighbour> knn_search(std::span<const double> query, const CandidatePool& pool,
                                  std::size_t k);

// Retrieved texts as utterances labeled with the query's intent.
std::vector<Utterance> knn_retrieve(const Utterance& query, const CandidatePool& pool,
                                    const EmbeddingTable& table, std::size_t k);

}  // namespace seedaug
