#include "seedaug/remote/protocol.hpp"

#include <stdexcept>

#include <json.hpp>

#include "seedaug/core/text.hpp"

namespace seedaug {

namespace {
using json = nlohmann::ordered_json;

json parse_frame(std::string_view frame) {
  json j = json::parse(frame, nullptr, false);
  if (j.is_discarded()) throw ProtocolViolation("malformed frame: " + std::string(frame.substr(0, 200)));
  if (!j.is_object()) throw ProtocolViolation("frame is not a JSON object");
  return j;
}
}  // namespace

bool is_pluggable(MethodId m) {
  switch (m) {
    case MethodId::translation:
    case MethodId::paraphrase:
    case MethodId::lm_decode:
    case MethodId::infill:
    case MethodId::typo:
      return true;
    default:
      return false;
  }
}

void PluginEndpoint::validate() const {
  if (timeout.count() <= 0) throw std::invalid_argument("plugin timeout must be positive");
  if (!is_pluggable(method))
    throw std::invalid_argument("method " + std::string(to_string(method)) + " cannot be served by a plugin");
  if (address.empty()) throw std::invalid_argument("plugin address is empty");
}

PluginEndpoint PluginEndpoint::parse_spec(std::string_view spec) {
  auto eq = spec.find('=');
  if (eq == std::string_view::npos) throw std::invalid_argument("plugin spec needs method=...: " + std::string(spec));
  auto method = parse_method(spec.substr(0, eq));
  if (!method) throw std::invalid_argument("unknown plugin method: " + std::string(spec.substr(0, eq)));
  std::string_view target = spec.substr(eq + 1);

  PluginEndpoint ep;
  ep.method = *method;
  if (target.starts_with("cmd:")) {
    ep.transport = Transport::subprocess;
    ep.address = normalize(target.substr(4));
  } else if (target.starts_with("http://")) {
    ep.transport = Transport::http;
    ep.address = std::string(target);
  } else {
    throw std::invalid_argument("plugin target must start with cmd: or http://: " + std::string(target));
  }
  ep.validate();
  return ep;
}

void PluginRequest::validate() const {
  if (n < 1) throw std::invalid_argument("plugin request n must be >= 1");
  const bool needs_source = method != MethodId::lm_decode;
  if (needs_source && !source)
    throw std::invalid_argument(std::string(to_string(method)) + " request needs a source");
  if (!needs_source && source) throw std::invalid_argument("lm_decode request must not carry a source");
}

std::string encode_request(const PluginRequest& req) {
  json j;
  j["method"] = to_string(req.method);
  j["intent"] = req.intent;
  j["source"] = req.source ? json(*req.source) : json(nullptr);
  j["seeds"] = req.seeds;
  j["n"] = req.n;
  j["rng_seed"] = req.rng_seed;
  j["languages"] = req.languages ? json(*req.languages) : json(nullptr);
  return j.dump();
}

std::string encode_hello() {
  json j;
  j["hello"] = {{"protocol", kProtocolVersion}};
  return j.dump();
}

PluginResponse decode_response(std::string_view frame, std::size_t requested_n) {
  json j = parse_frame(frame);
  const bool has_candidates = j.contains("candidates");
  const bool has_error = j.contains("error");
  if (has_candidates == has_error)
    throw ProtocolViolation("response needs exactly one of \"candidates\" or \"error\"");

  PluginResponse resp;
  if (has_error) {
    const auto& e = j["error"];
    if (!e.is_object() || !e.contains("code") || !e["code"].is_string() || !e.contains("message") ||
        !e["message"].is_string())
      throw ProtocolViolation("error frame needs string \"code\" and \"message\"");
    resp.error = PluginResponse::Failure{e["code"].get<std::string>(), e["message"].get<std::string>()};
    return resp;
  }
  const auto& c = j["candidates"];
  if (!c.is_array()) throw ProtocolViolation("\"candidates\" is not an array");
  if (c.size() > requested_n)
    throw ProtocolViolation("plugin returned " + std::to_string(c.size()) + " candidates for n = " +
                            std::to_string(requested_n));
  for (const auto& s : c) {
    if (!s.is_string()) throw ProtocolViolation("candidate is not a string");
    resp.candidates.push_back(s.get<std::string>());
  }
  return resp;
}

std::vector<MethodId> decode_ready(std::string_view frame) {
  json j = parse_frame(frame);
  auto it = j.find("ready");
  if (it == j.end() || !it->is_object()) throw ProtocolViolation("handshake reply lacks \"ready\"");
  auto m = it->find("methods");
  if (m == it->end() || !m->is_array()) throw ProtocolViolation("handshake reply lacks \"methods\"");
  std::vector<MethodId> out;
  for (const auto& name : *m) {
    if (!name.is_string()) throw ProtocolViolation("method name is not a string");
    // Unknown names are tolerated so newer plugins keep working.
    if (auto id = parse_method(name.get<std::string>())) out.push_back(*id);
  }
  return out;
}

const std::vector<std::string>& default_translation_languages() {
  static const std::vector<std::string> langs = {"fr", "pt", "es", "de", "ru"};
  return langs;
}

std::string lm_prompt_encode(std::string_view intent, std::string_view separator) {
  if (intent.empty()) throw std::invalid_argument("lm prompt needs an intent");
  std::string out(intent);
  out += separator;
  return out;
}

std::string lm_training_line(std::string_view intent, std::string_view utterance,
                             std::string_view separator) {
  return lm_prompt_encode(intent, separator) + std::string(utterance);
}

std::optional<std::string> lm_prompt_of(std::string_view line, std::string_view separator) {
  auto pos = line.find(separator);
  if (pos == std::string_view::npos) return std::nullopt;
  return std::string(line.substr(0, pos + separator.size()));
}

}  // namespace seedaug
