#include "seedaug/metrics/bleu.hpp"

#include <cmath>
#include <stdexcept>

#include "seedaug/metrics/metrics_error.hpp"

namespace seedaug {

namespace {

std::string ngram_key(const std::vector<std::string>& tokens, std::size_t start, std::size_t n) {
  std::string key;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) key.push_back('\x1f');
    key += tokens[start + i];
  }
  return key;
}

std::unordered_map<std::string, std::size_t> count_ngrams(const TokenSequence& seq, std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  if (seq.size() < n) return counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) ++counts[ngram_key(seq.tokens, i, n)];
  return counts;
}

}  // namespace

BleuReferenceSet::BleuReferenceSet(BleuConfig cfg) : cfg_(cfg), max_counts_(cfg.max_n) {
  if (cfg_.max_n < 1) throw std::invalid_argument("BLEU max_n must be >= 1");
}

void BleuReferenceSet::add(const TokenSequence& reference) {
  if (reference.empty()) throw MetricsError(MetricsError::Kind::empty_input, "empty BLEU reference");
  for (std::size_t n = 1; n <= cfg_.max_n; ++n) {
    auto& into = max_counts_[n - 1];
    for (const auto& [gram, c] : count_ngrams(reference, n)) {
      auto& slot = into[gram];
      if (c > slot) slot = c;
    }
  }
  lengths_.insert(reference.size());
  ++count_;
}

std::size_t BleuReferenceSet::closest_length(std::size_t c) const {
  auto it = lengths_.lower_bound(c);
  if (it == lengths_.end()) return *std::prev(it);
  if (*it == c || it == lengths_.begin()) return *it;
  std::size_t above = *it;
  std::size_t below = *std::prev(it);
  return (c - below) <= (above - c) ? below : above;
}

double BleuReferenceSet::score(const TokenSequence& candidate) const {
  if (candidate.empty()) throw MetricsError(MetricsError::Kind::empty_input, "empty BLEU candidate");
  if (count_ == 0) throw MetricsError(MetricsError::Kind::empty_input, "BLEU needs at least one reference");

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= cfg_.max_n; ++n) {
    const auto& refs = max_counts_[n - 1];
    std::size_t matched = 0;
    std::size_t total = 0;
    for (const auto& [gram, c] : count_ngrams(candidate, n)) {
      total += c;
      auto it = refs.find(gram);
      if (it != refs.end()) matched += std::min(c, it->second);
    }
    double p = 0.0;
    if (matched > 0) {
      p = static_cast<double>(matched) / static_cast<double>(total);
    } else if (n == 1) {
      return 0.0;
    } else {
      p = 1.0 / static_cast<double>(total + 1);
    }
    log_sum += std::log(p);
  }

  const std::size_t c = candidate.size();
  const std::size_t r = closest_length(c);
  const double bp = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(cfg_.max_n));
}

double sentence_bleu(const TokenSequence& candidate, std::span<const TokenSequence> references,
                     const BleuConfig& cfg) {
  if (references.empty()) throw MetricsError(MetricsError::Kind::empty_input, "BLEU needs at least one reference");
  BleuReferenceSet set(cfg);
  for (const auto& r : references) set.add(r);
  return set.score(candidate);
}

}  // namespace seedaug
