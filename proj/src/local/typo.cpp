#include <cmath>
#include <utility>

#include "seedaug/local/augment_ops.hpp"

namespace seedaug {

namespace {

bool ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}
bool ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool ascii_visible(char c) { return c > ' ' && c < 127; }

std::size_t visible_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += (c != ' ' && c != '\t' && c != '\n' && c != '\r') ? 1 : 0;
  return n;
}

// Positions at which `edit` can be applied to `s`.
std::vector<std::size_t> eligible_positions(const std::string& s, TypoEdit edit,
                                            const KeyboardMap& kb) {
  std::vector<std::size_t> out;
  switch (edit) {
    case TypoEdit::substitute:
      for (std::size_t i = 0; i < s.size(); ++i)
        if (ascii_alnum(s[i]) && kb.has_key(s[i])) out.push_back(i);
      break;
    case TypoEdit::remove:
      if (visible_count(s) < 2) break;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (ascii_alnum(s[i])) out.push_back(i);
      break;
    case TypoEdit::transpose:
      for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (ascii_visible(s[i]) && ascii_visible(s[i + 1]) && s[i] != s[i + 1]) out.push_back(i);
      break;
    case TypoEdit::duplicate:
      for (std::size_t i = 0; i < s.size(); ++i)
        if (ascii_alnum(s[i])) out.push_back(i);
      break;
  }
  return out;
}

char substitute_key(char original, const KeyboardMap& kb, std::size_t choice) {
  auto keys = kb.neighbours(original);
  char c = keys[choice];
  if (original >= 'A' && original <= 'Z' && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return c;
}

void apply_edit(std::string& s, const KeyboardMap& kb, RandomStream& rng) {
  auto edit = static_cast<TypoEdit>(rng.below(4));
  auto positions = eligible_positions(s, edit, kb);
  if (positions.empty()) {
    edit = TypoEdit::substitute;
    positions = eligible_positions(s, edit, kb);
  }
  const std::size_t p = positions[rng.below(positions.size())];
  switch (edit) {
    case TypoEdit::substitute:
      s[p] = substitute_key(s[p], kb, rng.below(kb.neighbours(s[p]).size()));
      break;
    case TypoEdit::remove:
      s.erase(p, 1);
      break;
    case TypoEdit::transpose:
      std::swap(s[p], s[p + 1]);
      break;
    case TypoEdit::duplicate:
      s.insert(p, 1, s[p]);
      break;
  }
}

}  // namespace

std::size_t default_typo_edit_count(std::string_view text) {
  auto edits = static_cast<std::size_t>(std::llround(0.05 * static_cast<double>(text.size())));
  return edits < 1 ? 1 : edits;
}

Utterance typo_generate(const Utterance& source, const KeyboardMap& keyboard,
                        std::size_t edit_count, RandomStream& rng) {
  bool has_alpha = false;
  for (char c : source.text) has_alpha = has_alpha || ascii_alpha(c);
  if (!has_alpha)
    throw AugmentError(AugmentError::Kind::no_alphabetic_content,
                       "no alphabetic characters in \"" + source.text + "\"");
  if (edit_count == 0) edit_count = 1;

  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::string text = source.text;
    for (std::size_t e = 0; e < edit_count; ++e) apply_edit(text, keyboard, rng);
    if (text != source.text) return Utterance::derived(source, std::move(text), MethodId::typo);
  }
  // Edits kept cancelling out; a single substitution always changes the text.
  std::string text = source.text;
  auto positions = eligible_positions(text, TypoEdit::substitute, keyboard);
  text[positions.front()] = substitute_key(text[positions.front()], keyboard, 0);
  return Utterance::derived(source, std::move(text), MethodId::typo);
}

}  // namespace seedaug
