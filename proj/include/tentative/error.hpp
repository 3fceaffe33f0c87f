#pragma once

#include <stdexcept>

namespace tentative {

/// Raised for malformed data, violated preconditions and undefined results.
/// The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tentative
