#pragma once

#include <stdexcept>
#include <string>

namespace hull_lil {

/// Raised on violated preconditions of the numerical routines.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hull_lil
