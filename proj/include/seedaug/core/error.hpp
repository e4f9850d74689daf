#pragma once

#include <stdexcept>
#include <string>

namespace seedaug {

// Base for every error the library raises deliberately. Subsystems derive
// their own types so callers can catch at the granularity they need.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace seedaug
