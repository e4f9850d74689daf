#include "seedaug/kernels/vector_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tables.hpp"

namespace seedaug::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SEEDAUG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* best_table() {
  if (const char* env = std::getenv("SEEDAUG_ISA")) {
    std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && isa_available(Isa::avx2)) return &kernels_for(Isa::avx2);
    if (want == "neon" && isa_available(Isa::neon)) return &kernels_for(Isa::neon);
  }
  if (isa_available(Isa::avx2)) return &kernels_for(Isa::avx2);
  if (isa_available(Isa::neon)) return &kernels_for(Isa::neon);
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{best_table()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
    case Isa::neon:
#if defined(SEEDAUG_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("kernel variant not available: " + std::string(to_string(isa)));
  switch (isa) {
#if defined(SEEDAUG_HAVE_AVX2)
    case Isa::avx2: return detail::avx2_table();
#endif
#if defined(SEEDAUG_HAVE_NEON)
    case Isa::neon: return detail::neon_table();
#endif
    default: return scalar_kernels();
  }
}

const KernelTable& active_kernels() { return *active_slot().load(std::memory_order_acquire); }

void set_active_isa(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

double squared_l2(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("squared_l2: dimension mismatch");
  return active_kernels().squared_l2(a.data(), b.data(), a.size());
}

void accumulate(std::span<double> acc, std::span<const double> v) {
  if (acc.size() != v.size()) throw std::invalid_argument("accumulate: dimension mismatch");
  active_kernels().accumulate(acc.data(), v.data(), v.size());
}

}  // namespace seedaug::kernels
