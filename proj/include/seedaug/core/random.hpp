#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <string_view>

namespace seedaug {

// Source of random draws for the augmenters. Every draw goes through
// below(), so a test can replay or force the exact sequence of choices.
class RandomStream {
 public:
  virtual ~RandomStream() = default;

  // Uniform integer in [0, bound). bound must be > 0.
  virtual std::uint64_t below(std::uint64_t bound) = 0;
  // Raw 64-bit value, used to seed plugin requests.
  virtual std::uint64_t next_u64() = 0;
};

// mt19937_64 with unbiased rejection sampling, so the draw sequence is
// identical on every platform (std::uniform_int_distribution is not).
class SeededStream final : public RandomStream {
 public:
  explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t bound) override;
  std::uint64_t next_u64() override { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Returns scripted values in order. Throws std::logic_error when exhausted
// or when a scripted value is out of range for the requested bound.
class ScriptedStream final : public RandomStream {
 public:
  ScriptedStream(std::initializer_list<std::uint64_t> values) : values_(values) {}

  std::uint64_t below(std::uint64_t bound) override;
  std::uint64_t next_u64() override;
  std::size_t remaining() const { return values_.size(); }

 private:
  std::deque<std::uint64_t> values_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

// Seed for a per-key stream (one per intent), independent of scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);

}  // namespace seedaug
