#ifndef BENTCABLE_ERROR_HPP
#define BENTCABLE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bentcable {

enum class ErrorKind {
  ParameterDomain,
  NonIntegrable,
  Route,
  RemovableSingularity,
  Configuration,
  SingularDesign,
  InsufficientData,
  InsufficientReplication,
  OptimizationFailure,
  FitFailure,
  MismatchedData,
  Input,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type; kind() tells callers
// (and the CLI exit-code mapping) which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bentcable

#endif  // BENTCABLE_ERROR_HPP
