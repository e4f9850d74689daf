#pragma once

#include <string>

#include "seedaug/core/error.hpp"

namespace seedaug {

class MetricsError : public Error {
 public:
  enum class Kind { empty_input, empty_corpus, unknown_intent_in_test, dangling_review };

  MetricsError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace seedaug
