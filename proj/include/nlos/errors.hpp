#pragma once

#include <stdexcept>
#include <string>

namespace nlos {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + what
                                    : what),
        line(line) {}
  int line;
};

struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what, int iteration = -1)
      : std::runtime_error(what), iteration(iteration) {}
  int iteration;
};

}  // namespace nlos
