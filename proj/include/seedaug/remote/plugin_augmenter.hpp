#pragma once

#include <memory>
#include <string>
#include <vector>

#include "seedaug/pipeline/augmenter.hpp"
#include "seedaug/remote/plugin_client.hpp"

namespace seedaug {

// Augmenter served by an external plugin. Each round is one request for
// `count` candidates. Back-translation rounds carry a single language,
// cycling through `languages` by round index.
class PluginAugmenter final : public Augmenter {
 public:
  explicit PluginAugmenter(std::shared_ptr<PluginClient> client,
                           std::vector<std::string> languages = default_translation_languages());

  MethodId method() const override { return client_->endpoint().method; }
  std::vector<Utterance> generate(const RoundInput& in, RandomStream& rng) const override;

  // The request generate() would send; exposed for tests and tooling.
  PluginRequest build_request(const RoundInput& in, std::uint64_t rng_seed) const;

 private:
  std::shared_ptr<PluginClient> client_;
  std::vector<std::string> languages_;
};

}  // namespace seedaug
