#ifndef MESHCLOAK_ERROR_HPP
#define MESHCLOAK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace meshcloak {

// Invalid input files, malformed configuration, violated preconditions the
// caller could have checked. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Failures while running (I/O mid-stream, engine contract breaches).
// The CLI maps this to exit code 2.
class EngineError : public std::runtime_error {
 public:
  explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace meshcloak

#endif  // MESHCLOAK_ERROR_HPP
