#pragma once

#include <stdexcept>
#include <string>

namespace swarm {

// All recoverable failures in the library are reported with this type.
// The message is the stable, user-facing part (e.g. "outside arena").
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swarm
