#pragma once

// Error taxonomy for the library. Input-contract violations (bad parameters,
// malformed files, incompatible objects) throw ValidationError; failures of a
// numerical procedure on admissible input (root not bracketed, unsatisfiable
// threshold equations, quadrature breakdown) throw NumericalError. The CLI
// maps the two classes to distinct exit codes.

#include <stdexcept>
#include <string>

namespace hotv {

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hotv
