#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seedaug/core/error.hpp"
#include "seedaug/core/method.hpp"

namespace seedaug {

// Failures talking to an augmenter plugin.
class PluginFailure : public Error {
 public:
  using Error::Error;
};

class PluginTimeout : public PluginFailure {
 public:
  using PluginFailure::PluginFailure;
};

// The plugin answered with an {"error": ...} frame.
class PluginError : public PluginFailure {
 public:
  PluginError(std::string code, std::string message)
      : PluginFailure("plugin error " + code + ": " + message),
        code_(std::move(code)),
        message_(std::move(message)) {}
  const std::string& code() const { return code_; }
  const std::string& detail() const { return message_; }

 private:
  std::string code_;
  std::string message_;
};

// A frame that does not parse or does not match the protocol shape.
class ProtocolViolation : public PluginFailure {
 public:
  using PluginFailure::PluginFailure;
};

class MethodMismatch : public PluginFailure {
 public:
  using PluginFailure::PluginFailure;
};

// Process died, connection refused, broken pipe. Retried once.
class TransportFailure : public PluginFailure {
 public:
  using PluginFailure::PluginFailure;
};

inline constexpr int kProtocolVersion = 1;
inline constexpr std::string_view kDefaultSeparator = " <SEP> ";

struct PluginEndpoint {
  enum class Transport { subprocess, http };

  Transport transport = Transport::subprocess;
  std::string address;  // command line, or http://host:port
  std::chrono::milliseconds timeout{30000};
  MethodId method = MethodId::paraphrase;

  // Throws std::invalid_argument on a bad endpoint.
  void validate() const;

  // "method=cmd:/path/to/bin args" or "method=http://host:port".
  static PluginEndpoint parse_spec(std::string_view spec);
};

bool is_pluggable(MethodId m);

struct PluginRequest {
  MethodId method = MethodId::paraphrase;
  std::string intent;
  std::optional<std::string> source;
  std::vector<std::string> seeds;
  std::size_t n = 1;
  std::uint64_t rng_seed = 0;
  std::optional<std::vector<std::string>> languages;

  void validate() const;
};

struct PluginResponse {
  struct Failure {
    std::string code;
    std::string message;
  };
  std::vector<std::string> candidates;
  std::optional<Failure> error;
};

// One line, no trailing newline; keys in the documented order.
std::string encode_request(const PluginRequest& req);
std::string encode_hello();
// Throws ProtocolViolation.
PluginResponse decode_response(std::string_view frame, std::size_t requested_n);
std::vector<MethodId> decode_ready(std::string_view frame);

// Language codes cycled by back-translation requests.
const std::vector<std::string>& default_translation_languages();

// "intent<SEP>": what an LM plugin conditions on before decoding.
std::string lm_prompt_encode(std::string_view intent, std::string_view separator = kDefaultSeparator);
// "intent<SEP>utterance": one LM fine-tuning line.
std::string lm_training_line(std::string_view intent, std::string_view utterance,
                             std::string_view separator = kDefaultSeparator);
// Prefix of a training line up to and including the first separator;
// nullopt when the separator does not occur.
std::optional<std::string> lm_prompt_of(std::string_view line,
                                        std::string_view separator = kDefaultSeparator);

}  // namespace seedaug
