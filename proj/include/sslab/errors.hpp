#pragma once

#include <stdexcept>
#include <string>

namespace sslab {

// Caller-supplied inputs or configuration violate a precondition.
// The CLI maps this to exit code 2; anything else lands on exit code 1.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sslab
