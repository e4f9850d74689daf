#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seedaug/core/error.hpp"

namespace seedaug {

class ResourceError : public Error {
 public:
  ResourceError(std::string source, std::size_t line, const std::string& why)
      : Error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + why),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class PosTag { noun, verb, adj, adv, det, pron, other };

std::string_view to_string(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view s);

// Content-word tags eligible for synonym replacement.
bool is_content_tag(PosTag tag);

// Flat stand-in for a lexical database: (lemma, tag) -> synonyms.
// Loaded from TSV lines "lemma<TAB>TAG<TAB>syn1|syn2|...".
class Thesaurus {
 public:
  // Drops empty synonyms and synonyms equal to the lemma; an entry left
  // with nothing is not stored.
  void add(std::string lemma, PosTag tag, std::vector<std::string> synonyms);
  std::span<const std::string> lookup(const std::string& lemma, PosTag tag) const;
  std::size_t size() const { return entries_.size(); }

  static Thesaurus parse(std::istream& in, std::string_view source = "thesaurus");
  static Thesaurus load(const std::filesystem::path& path);

 private:
  std::map<std::pair<std::string, PosTag>, std::vector<std::string>> entries_;
};

// Most-frequent-tag lookup. Tokens are matched lowercased; unknown tokens
// resolve to PosTag::other. TSV lines "token<TAB>TAG".
class PosLexicon {
 public:
  void set(std::string token, PosTag tag);
  PosTag tag(std::string_view token) const;
  std::size_t size() const { return tags_.size(); }

  static PosLexicon parse(std::istream& in, std::string_view source = "pos lexicon");
  static PosLexicon load(const std::filesystem::path& path);

 private:
  std::unordered_map<std::string, PosTag> tags_;
};

// token -> dense vector, all of the same dimension and finite.
// Text format: "token v1 v2 ... vdim" per line.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim);

  void add(std::string token, std::span<const double> vector);
  // nullptr for out-of-vocabulary tokens.
  const double* find(std::string_view token) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }
  bool empty() const { return index_.empty(); }

  static EmbeddingTable parse(std::istream& in, std::string_view source = "embeddings");
  static EmbeddingTable load(const std::filesystem::path& path);

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

// Unlabeled candidate texts with their bag-of-words embeddings stored
// row-major in one contiguous buffer.
class CandidatePool {
 public:
  // Embeds every text with embed_bow against `table`.
  CandidatePool(std::vector<std::string> texts, const EmbeddingTable& table);
  // Pre-embedded rows; `rows.size()` must equal texts.size() * dim.
  CandidatePool(std::vector<std::string> texts, std::vector<double> rows, std::size_t dim);

  std::size_t size() const { return texts_.size(); }
  bool empty() const { return texts_.empty(); }
  std::size_t dim() const { return dim_; }
  const std::string& text(std::size_t i) const { return texts_[i]; }
  std::span<const double> row(std::size_t i) const {
    return {rows_.data() + i * dim_, dim_};
  }
  std::span<const double> rows() const { return rows_; }

  // One utterance per non-blank line.
  static std::vector<std::string> read_texts(const std::filesystem::path& path);

 private:
  std::vector<std::string> texts_;
  std::vector<double> rows_;
  std::size_t dim_;
};

// Bigram counts over a token corpus, the local in-filling model.
class NGramModel {
 public:
  void add_sentence(std::span<const std::string> tokens);

  std::size_t unigram(const std::string& w) const;
  std::size_t bigram(const std::string& left, const std::string& right) const;
  // Vocabulary in lexicographic order.
  const std::vector<std::string>& vocab() const { return vocab_; }
  bool empty() const { return vocab_.empty(); }
  // Most frequent unigram, lexicographically smallest on ties.
  const std::string& most_frequent() const;

  // Learns from every text (tokenized).
  static NGramModel train(std::span<const std::string> texts);

 private:
  std::unordered_map<std::string, std::size_t> unigrams_;
  std::unordered_map<std::string, std::size_t> bigrams_;
  std::vector<std::string> vocab_;
};

// Physical key adjacency on a QWERTY keyboard for a-z and 0-9. Neighbours
// are listed in ascending character order and the relation is symmetric.
class KeyboardMap {
 public:
  static const KeyboardMap& qwerty();

  // Empty span for characters without a key (case-insensitive lookup).
  std::span<const char> neighbours(char c) const;
  bool has_key(char c) const;

 private:
  KeyboardMap();
  std::vector<char> adjacency_[128];
};

}  // namespace seedaug
