// Built with -mavx2 -ffp-contract=off; only reached after a runtime CPU check.
#include <immintrin.h>

#include "tables.hpp"

namespace seedaug::kernels::detail {

namespace {

inline double squared_l2_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (std::size_t j = 0; i + j < n; ++j) {
    const double d = a[i + j] - b[i + j];
    lanes[j] += d * d;
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void accumulate_avx2(double* acc, const double* v, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(v + i)));
  }
  for (; i < n; ++i) acc[i] += v[i];
}

void squared_l2_rows_avx2(const double* query, const double* rows, std::size_t row_count,
                          std::size_t dim, double* out) {
  for (std::size_t r = 0; r < row_count; ++r) out[r] = squared_l2_avx2(query, rows + r * dim, dim);
}

constexpr KernelTable kAvx2{Isa::avx2, squared_l2_avx2, accumulate_avx2, squared_l2_rows_avx2};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace seedaug::kernels::detail
