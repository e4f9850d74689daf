// AArch64 only. Two float64x2 registers hold lanes {0,1} and {2,3}.
#include <arm_neon.h>

#include "tables.hpp"

namespace seedaug::kernels::detail {

namespace {

inline double squared_l2_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc01 = vdupq_n_f64(0.0);
  float64x2_t acc23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d01 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    const float64x2_t d23 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc01 = vaddq_f64(acc01, vmulq_f64(d01, d01));
    acc23 = vaddq_f64(acc23, vmulq_f64(d23, d23));
  }
  double lanes[4];
  vst1q_f64(lanes, acc01);
  vst1q_f64(lanes + 2, acc23);
  for (std::size_t j = 0; i + j < n; ++j) {
    const double d = a[i + j] - b[i + j];
    lanes[j] += d * d;
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void accumulate_neon(double* acc, const double* v, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(v + i)));
  for (; i < n; ++i) acc[i] += v[i];
}

void squared_l2_rows_neon(const double* query, const double* rows, std::size_t row_count,
                          std::size_t dim, double* out) {
  for (std::size_t r = 0; r < row_count; ++r) out[r] = squared_l2_neon(query, rows + r * dim, dim);
}

constexpr KernelTable kNeon{Isa::neon, squared_l2_neon, accumulate_neon, squared_l2_rows_neon};

}  // namespace

const KernelTable& neon_table() { return kNeon; }

}  // namespace seedaug::kernels::detail
