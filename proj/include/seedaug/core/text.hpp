#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace seedaug {

struct Utterance;

struct TokenSequence {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  // Tokens joined by single spaces.
  std::string join() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

// Lowercases, splits on whitespace and detaches trailing . , ? ! marks as
// separate tokens. Non-ASCII bytes pass through untouched.
TokenSequence tokenize(std::string_view text);

// Trims and collapses whitespace runs to one space. Case is preserved.
std::string normalize(std::string_view text);

// Leading and trailing whitespace removed; interior untouched.
std::string trim(std::string_view text);

std::string join_tokens(std::span<const std::string> tokens);

// Normalized texts already present for one intent: seeds plus accepted
// augmentations. Matching is exact after normalize(), so case-sensitive.
class DedupSet {
 public:
  DedupSet() = default;

  bool contains(std::string_view text) const;
  // Returns false when the normalized text was already present.
  bool insert(std::string_view text);
  std::size_t size() const { return seen_.size(); }

 private:
  std::unordered_set<std::string> seen_;
};

bool is_duplicate(const Utterance& candidate, const DedupSet& existing);

}  // namespace seedaug
