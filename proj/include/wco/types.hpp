#pragma once

#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace wco {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;

// Invalid construction parameters (moduli out of range, malformed partitions,
// violated normal-form conditions).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation outside the open polydisk or at a pole.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Operands living in different ambient dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string to_string(cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", z.real(), z.imag());
  return buf;
}

}  // namespace wco
