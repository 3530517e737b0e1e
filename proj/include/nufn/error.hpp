#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace nufn {

/// Base of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of the function.
class domain_error : public error {
 public:
  using error::error;
};

/// Structure function whose series/integral diverges for every w != 0 (p > q + 1).
class divergent_family : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Family not covered by an elementary weight reduction.
class unsupported_family : public domain_error {
 public:
  using domain_error::domain_error;
};

/// Integrand or intermediate value became NaN or infinite.
class non_finite : public error {
 public:
  using error::error;
};

/// No truncation point was found below the search clamp.
class non_decaying : public error {
 public:
  using error::error;
};

/// Series hit its term cap before reaching the cutoff.
class no_convergence : public error {
 public:
  using error::error;
};

/// Adaptive quadrature ran out of panels; carries the best estimate it had.
class tolerance_not_met : public error {
 public:
  tolerance_not_met(const std::string& what, std::complex<double> estimate, double error_bound)
      : error(what), estimate_(estimate), error_bound_(error_bound) {}

  std::complex<double> estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  std::complex<double> estimate_;
  double error_bound_;
};

/// Expression node outside the operator grammar.
class unsupported_node : public error {
 public:
  using error::error;
};

/// Malformed operator expression text; position is a 0-based character offset.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t position)
      : error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace nufn
