#include "seedaug/core/method.hpp"

#include <algorithm>

namespace seedaug {

namespace {

struct Entry {
  MethodId id;
  std::string_view name;
};

constexpr std::array<Entry, 12> kNames = {{
    {MethodId::eda, "eda"},
    {MethodId::synonym, "synonym"},
    {MethodId::paraphrase, "paraphrase"},
    {MethodId::translation, "translation"},
    {MethodId::infill, "infill"},
    {MethodId::typo, "typo"},
    {MethodId::knn, "knn"},
    {MethodId::lm_decode, "lm_decode"},
    {MethodId::top4, "top4"},
    {MethodId::category_best, "category_best"},
    {MethodId::heuristic, "heuristic"},
    {MethodId::mix_all, "mix_all"},
}};

}  // namespace

std::string_view to_string(MethodId m) {
  for (const auto& e : kNames) {
    if (e.id == m) return e.name;
  }
  return "unknown";
}

std::optional<MethodId> parse_method(std::string_view s) {
  for (const auto& e : kNames) {
    if (e.name == s) return e.id;
  }
  return std::nullopt;
}

bool is_single_method(MethodId m) {
  return std::find(kSingleMethods.begin(), kSingleMethods.end(), m) != kSingleMethods.end();
}

bool is_mix_strategy(MethodId m) { return !is_single_method(m); }

std::string single_method_names() {
  std::string out;
  for (MethodId m : kSingleMethods) {
    if (!out.empty()) out += ", ";
    out += to_string(m);
  }
  return out;
}

}  // namespace seedaug
