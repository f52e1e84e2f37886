#pragma once

#include <stdexcept>
#include <string>

namespace pme {

// Bad input: out-of-range parameter, malformed matrix, empty list.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A size guard was exceeded (dimension, branch count, qubit count).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pme
