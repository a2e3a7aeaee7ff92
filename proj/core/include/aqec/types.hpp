#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace aqec {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Numerical tolerances shared across the library. Residuals up to these
// magnitudes are treated as exact zeros by validation and classification.
struct Tols {
  double hermitian = 1e-9;
  double psd = 1e-9;
  double trace = 1e-8;
  double tp = 1e-8;
  double kl = 1e-8;
  double prune = 1e-12;
};

// Capacity limits for dense constructions. max_dim bounds any materialized
// matrix dimension, enum_cap bounds explicit sequence enumeration, entry_cap
// bounds total dense entries of a Kraus family.
struct Limits {
  int max_dim = 4096;
  long long enum_cap = 10'000'000;
  long long entry_cap = 20'000'000;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain numerical input (non-PSD state, non-normalized
// trace, invalid Kraus family, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// A requested dense construction exceeds the configured capacity limits.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A documented operation precondition fails; carries the offending residual.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& msg, double residual)
      : Error(msg), residual(residual) {}
  double residual;
};

// Monte Carlo estimate. closed_form and sigmas are populated together when an
// exact reference value exists; upper_bound carries an analytic bound instead
// when only a one-sided reference is available.
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  std::optional<double> closed_form;
  std::optional<double> sigmas;
  std::optional<double> upper_bound;
};

}  // namespace aqec
