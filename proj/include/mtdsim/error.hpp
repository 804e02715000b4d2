#pragma once

#include <stdexcept>
#include <string>

namespace mtdsim {

// Domain error for configuration, validation, and contract violations.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mtdsim
