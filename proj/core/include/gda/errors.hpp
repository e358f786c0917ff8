#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gda {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape mismatch: non-square eigenproblem input, state/operator size, ...
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter value (step size, momentum range, grid spec, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A checker or experiment was invoked on a game outside its regime.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// The empirical condition number is undefined (min real part ~ 0).
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// A generator could not satisfy its rank condition within the retry cap.
class GenerationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Numerical failure (non-convergence of an iteration, non-finite values).
// Carries whatever partial eigenvalues were recoverable, possibly none.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what,
                          std::vector<std::complex<double>> partial = {})
      : Error(what), partial_(std::move(partial)) {}

  const std::vector<std::complex<double>>& partial_results() const { return partial_; }

 private:
  std::vector<std::complex<double>> partial_;
};

}  // namespace gda
