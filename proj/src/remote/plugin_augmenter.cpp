#include "seedaug/remote/plugin_augmenter.hpp"

#include "seedaug/core/text.hpp"

namespace seedaug {

PluginAugmenter::PluginAugmenter(std::shared_ptr<PluginClient> client, std::vector<std::string> languages)
    : client_(std::move(client)), languages_(std::move(languages)) {
  if (method() == MethodId::translation && languages_.empty())
    throw std::invalid_argument("back-translation needs at least one language");
}

PluginRequest PluginAugmenter::build_request(const RoundInput& in, std::uint64_t rng_seed) const {
  PluginRequest req;
  req.method = method();
  req.intent = std::string(in.intent);
  if (req.method != MethodId::lm_decode) req.source = in.source.text;
  for (const auto& s : in.seeds) req.seeds.push_back(s.text);
  req.n = in.count;
  req.rng_seed = rng_seed;
  if (req.method == MethodId::translation)
    req.languages = std::vector<std::string>{languages_[in.round_index % languages_.size()]};
  return req;
}

std::vector<Utterance> PluginAugmenter::generate(const RoundInput& in, RandomStream& rng) const {
  auto req = build_request(in, rng.next_u64());
  std::vector<Utterance> out;
  for (auto& text : client_->request_candidates(req)) {
    if (normalize(text).empty()) continue;
    if (req.method == MethodId::lm_decode)
      out.push_back(Utterance::generated(std::move(text), std::string(in.intent), MethodId::lm_decode));
    else
      out.push_back(Utterance::derived(in.source, std::move(text), req.method));
  }
  return out;
}

}  // namespace seedaug
