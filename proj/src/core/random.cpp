#include "seedaug/core/random.hpp"

#include <stdexcept>
#include <string>

namespace seedaug {

std::uint64_t SeededStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below(0)");
  // Reject the top partial bucket so x % bound is uniform.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  std::uint64_t x = engine_();
  while (x > limit) x = engine_();
  return x % bound;
}

std::uint64_t ScriptedStream::below(std::uint64_t bound) {
  if (values_.empty()) throw std::logic_error("scripted stream exhausted");
  std::uint64_t v = values_.front();
  values_.pop_front();
  if (v >= bound)
    throw std::logic_error("scripted value " + std::to_string(v) + " out of range " +
                           std::to_string(bound));
  return v;
}

std::uint64_t ScriptedStream::next_u64() {
  if (values_.empty()) throw std::logic_error("scripted stream exhausted");
  std::uint64_t v = values_.front();
  values_.pop_front();
  return v;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view key) {
  return splitmix64(splitmix64(base) ^ fnv1a64(key));
}

}  // namespace seedaug
