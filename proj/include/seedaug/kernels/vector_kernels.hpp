#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision kernels behind the bag-of-words embedding and the
// exhaustive nearest-neighbour scan.
//
// Every variant accumulates squared differences into four lanes (element i
// goes to lane i % 4) and reduces them as (l0 + l1) + (l2 + l3). The scalar
// reference follows the same order, and the kernel sources are compiled
// without FMA contraction, so all variants return bit-identical results.
// That is what lets the nearest-neighbour tie order stay exact regardless
// of which ISA was picked at runtime.

namespace seedaug::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  double (*squared_l2)(const double* a, const double* b, std::size_t n);
  // acc[i] += v[i]
  void (*accumulate)(double* acc, const double* v, std::size_t n);
  // out[r] = squared_l2(query, rows + r * dim, dim) for each row.
  void (*squared_l2_rows)(const double* query, const double* rows, std::size_t row_count,
                          std::size_t dim, double* out);
};

const KernelTable& scalar_kernels();

// True when the variant was compiled in and the running CPU supports it.
bool isa_available(Isa isa);

// Throws std::invalid_argument when !isa_available(isa).
const KernelTable& kernels_for(Isa isa);

// Best available variant, unless SEEDAUG_ISA=scalar|avx2|neon overrides it
// or set_active_isa() was called.
const KernelTable& active_kernels();
void set_active_isa(Isa isa);

double squared_l2(std::span<const double> a, std::span<const double> b);
void accumulate(std::span<double> acc, std::span<const double> v);

}  // namespace seedaug::kernels
