#include "seedaug/metrics/mtld.hpp"

#include <stdexcept>
#include <unordered_set>

namespace seedaug {

namespace {

template <typename It>
double one_pass(It begin, It end, std::size_t total, double threshold) {
  double factors = 0.0;
  std::unordered_set<std::string_view> types;
  std::size_t segment = 0;
  for (It it = begin; it != end; ++it) {
    types.insert(*it);
    ++segment;
    const double ttr = static_cast<double>(types.size()) / static_cast<double>(segment);
    if (ttr < threshold) {
      factors += 1.0;
      types.clear();
      segment = 0;
    }
  }
  if (segment > 0) {
    const double ttr = static_cast<double>(types.size()) / static_cast<double>(segment);
    factors += (1.0 - ttr) / (1.0 - threshold);
  }
  if (factors == 0.0) return static_cast<double>(total);
  return static_cast<double>(total) / factors;
}

}  // namespace

double mtld(const TokenSequence& tokens, const MtldConfig& cfg) {
  if (!(cfg.ttr_threshold > 0.0 && cfg.ttr_threshold < 1.0))
    throw std::invalid_argument("MTLD threshold must lie in (0, 1)");
  const auto& t = tokens.tokens;
  if (t.empty()) return 0.0;
  const double fwd = one_pass(t.begin(), t.end(), t.size(), cfg.ttr_threshold);
  const double bwd = one_pass(t.rbegin(), t.rend(), t.size(), cfg.ttr_threshold);
  return (fwd + bwd) / 2.0;
}

}  // namespace seedaug
