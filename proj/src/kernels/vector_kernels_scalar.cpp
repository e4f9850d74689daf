#include "seedaug/kernels/vector_kernels.hpp"

namespace seedaug::kernels {

namespace {

double squared_l2_scalar(const double* a, const double* b, std::size_t n) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    lanes[i & 3] += d * d;
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void accumulate_scalar(double* acc, const double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += v[i];
}

void squared_l2_rows_scalar(const double* query, const double* rows, std::size_t row_count,
                            std::size_t dim, double* out) {
  for (std::size_t r = 0; r < row_count; ++r) out[r] = squared_l2_scalar(query, rows + r * dim, dim);
}

constexpr KernelTable kScalar{Isa::scalar, squared_l2_scalar, accumulate_scalar,
                              squared_l2_rows_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace seedaug::kernels
