// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>

namespace ricciforge {

/// Exception type raised on precondition violations and numerical degeneracies.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& message) { throw Error(message); }

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(message);
}

}  // namespace ricciforge
