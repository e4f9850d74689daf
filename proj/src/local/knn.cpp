#include <algorithm>
#include <cmath>
#include <numeric>

#include "seedaug/core/text.hpp"
#include "seedaug/kernels/vector_kernels.hpp"
#include "seedaug/local/augment_ops.hpp"

namespace seedaug {

std::vector<double> embed_bow(std::string_view text, const EmbeddingTable& table) {
  std::vector<double> sum(table.dim(), 0.0);
  const auto& k = kernels::active_kernels();
  std::size_t hits = 0;
  for (const auto& token : tokenize(text).tokens) {
    if (const double* v = table.find(token)) {
      k.accumulate(sum.data(), v, table.dim());
      ++hits;
    }
  }
  if (hits > 0) {
    const auto denom = static_cast<double>(hits);
    for (double& x : sum) x /= denom;
  }
  return sum;
}

std::vector<Neighbour> knn_search(std::span<const double> query, const CandidatePool& pool,
                                  std::size_t k) {
  if (pool.empty()) throw AugmentError(AugmentError::Kind::empty_pool, "candidate pool is empty");
  if (k == 0 || k > pool.size())
    throw AugmentError(AugmentError::Kind::k_too_large,
                       "k = " + std::to_string(k) + " with pool size " + std::to_string(pool.size()));
  if (query.size() != pool.dim()) throw std::invalid_argument("query dimension differs from pool");

  std::vector<double> dist(pool.size());
  kernels::active_kernels().squared_l2_rows(query.data(), pool.rows().data(), pool.size(),
                                            pool.dim(), dist.data());

  // Ranking uses squared distances; sqrt could merge neighbouring values
  // and disturb index tie-breaking.
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto closer = [&](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), closer);

  std::vector<Neighbour> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back({order[i], std::sqrt(dist[order[i]])});
  return out;
}

std::vector<Utterance> knn_retrieve(const Utterance& query, const CandidatePool& pool,
                                    const EmbeddingTable& table, std::size_t k) {
  if (pool.empty()) throw AugmentError(AugmentError::Kind::empty_pool, "candidate pool is empty");
  auto hits = knn_search(embed_bow(query.text, table), pool, k);
  std::vector<Utterance> out;
  out.reserve(hits.size());
  for (const auto& h : hits)
    out.push_back(Utterance::generated(pool.text(h.index), query.intent, MethodId::knn, query.text));
  return out;
}

}  // namespace seedaug
