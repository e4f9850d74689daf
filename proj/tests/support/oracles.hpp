#pragma once

// Straightforward reimplementations used to cross-check the library. They
// favour obviousness over speed and share no code with src/.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline double mtld_pass(const std::vector<std::string>& tokens, double threshold) {
  double factors = 0.0;
  std::vector<std::string> segment;
  for (const auto& t : tokens) {
    segment.push_back(t);
    std::set<std::string> types(segment.begin(), segment.end());
    double ttr = static_cast<double>(types.size()) / static_cast<double>(segment.size());
    if (ttr < threshold) {
      factors += 1.0;
      segment.clear();
    }
  }
  if (!segment.empty()) {
    std::set<std::string> types(segment.begin(), segment.end());
    double ttr = static_cast<double>(types.size()) / static_cast<double>(segment.size());
    factors += (1.0 - ttr) / (1.0 - threshold);
  }
  if (factors == 0.0) return static_cast<double>(tokens.size());
  return static_cast<double>(tokens.size()) / factors;
}

inline double mtld(const std::vector<std::string>& tokens, double threshold = 0.72) {
  if (tokens.empty()) return 0.0;
  std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
  return (mtld_pass(tokens, threshold) + mtld_pass(reversed, threshold)) / 2.0;
}

inline std::map<std::vector<std::string>, int> ngrams(const std::vector<std::string>& t, std::size_t n) {
  std::map<std::vector<std::string>, int> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) out[std::vector<std::string>(t.begin() + i, t.begin() + i + n)]++;
  return out;
}

inline double bleu(const std::vector<std::string>& cand, const std::vector<std::vector<std::string>>& refs,
                   std::size_t max_n = 4) {
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    auto c = ngrams(cand, n);
    int total = 0, matched = 0;
    for (const auto& [g, k] : c) {
      total += k;
      int clip = 0;
      for (const auto& r : refs) {
        auto rg = ngrams(r, n);
        auto it = rg.find(g);
        if (it != rg.end()) clip = std::max(clip, it->second);
      }
      matched += std::min(k, clip);
    }
    double p;
    if (n == 1) {
      if (matched == 0) return 0.0;
      p = static_cast<double>(matched) / total;
    } else if (matched == 0) {
      p = 1.0 / (total + 1);
    } else {
      p = static_cast<double>(matched) / total;
    }
    log_sum += std::log(p);
  }
  // closest reference length, shorter on ties
  std::size_t c = cand.size(), r = refs.front().size();
  for (const auto& ref : refs) {
    auto d = [&](std::size_t x) { return x > c ? x - c : c - x; };
    if (d(ref.size()) < d(r) || (d(ref.size()) == d(r) && ref.size() < r)) r = ref.size();
  }
  double bp = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(max_n));
}

inline std::size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[a.size()][b.size()];
}

// (index, squared distance) of the k nearest rows, full sort.
inline std::vector<std::pair<std::size_t, double>> knn(const std::vector<double>& query,
                                                       const std::vector<std::vector<double>>& rows,
                                                       std::size_t k) {
  std::vector<std::pair<std::size_t, double>> all;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) s += (query[j] - rows[i][j]) * (query[j] - rows[i][j]);
    all.emplace_back(i, s);
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  all.resize(std::min(k, all.size()));
  return all;
}

}  // namespace oracle
