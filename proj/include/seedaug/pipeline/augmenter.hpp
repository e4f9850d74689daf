#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "seedaug/core/random.hpp"
#include "seedaug/core/types.hpp"

namespace seedaug {

// Everything an augmenter sees for one generation round.
struct RoundInput {
  std::string_view intent;
  const Utterance& source;          // chosen round-robin by the pipeline
  std::span<const Utterance> seeds;  // the intent's full seed list
  std::size_t round_index = 0;
  std::size_t count = 3;  // requested candidates
};

// One augmentation technique. Implementations are immutable after
// construction; generate() may be called concurrently with distinct streams.
class Augmenter {
 public:
  virtual ~Augmenter() = default;

  virtual MethodId method() const = 0;

  // Candidates for the round. May throw; the pipeline treats any exception
  // as a failed round.
  virtual std::vector<Utterance> generate(const RoundInput& in, RandomStream& rng) const = 0;
};

}  // namespace seedaug
