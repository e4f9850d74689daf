#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace seedaug {

// The eight single augmentation techniques followed by the four mixing
// strategies. Strings are the identifiers used in every file format.
enum class MethodId {
  eda,
  synonym,
  paraphrase,
  translation,
  infill,
  typo,
  knn,
  lm_decode,
  top4,
  category_best,
  heuristic,
  mix_all,
};

inline constexpr std::array<MethodId, 8> kSingleMethods = {
    MethodId::eda,    MethodId::synonym, MethodId::paraphrase, MethodId::translation,
    MethodId::infill, MethodId::typo,    MethodId::knn,        MethodId::lm_decode,
};

inline constexpr std::array<MethodId, 4> kMixStrategies = {
    MethodId::top4, MethodId::category_best, MethodId::heuristic, MethodId::mix_all};

std::string_view to_string(MethodId m);
std::optional<MethodId> parse_method(std::string_view s);
bool is_single_method(MethodId m);
bool is_mix_strategy(MethodId m);

// Comma-separated list of the names accepted by parse_method for singles.
std::string single_method_names();

}  // namespace seedaug
