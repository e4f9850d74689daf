#include "seedaug/core/text.hpp"

#include <algorithm>
#include <stdexcept>

#include "seedaug/core/types.hpp"

namespace seedaug {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_detached_mark(char c) { return c == '.' || c == ',' || c == '?' || c == '!'; }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

void push_word(std::string_view word, std::vector<std::string>& out) {
  std::size_t end = word.size();
  while (end > 0 && is_detached_mark(word[end - 1])) --end;
  if (end > 0) {
    std::string lowered(word.substr(0, end));
    std::transform(lowered.begin(), lowered.end(), lowered.begin(), ascii_lower);
    out.push_back(std::move(lowered));
  }
  for (std::size_t i = end; i < word.size(); ++i) out.emplace_back(1, word[i]);
}

}  // namespace

std::string TokenSequence::join() const { return join_tokens(tokens); }

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

TokenSequence tokenize(std::string_view text) {
  TokenSequence seq;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) push_word(text.substr(start, i - start), seq.tokens);
  }
  return seq;
}

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && is_space(text[b])) ++b;
  while (e > b && is_space(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

bool DedupSet::contains(std::string_view text) const {
  return seen_.count(normalize(text)) != 0;
}

bool DedupSet::insert(std::string_view text) { return seen_.insert(normalize(text)).second; }

bool is_duplicate(const Utterance& candidate, const DedupSet& existing) {
  return existing.contains(candidate.text);
}

}  // namespace seedaug
