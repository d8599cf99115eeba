#ifndef GFC_ERRORS_HPP
#define GFC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gfc {

// Bad operands: degenerate polynomials, sample-time mismatch, improper
// systems fed to causal simulation, out-of-range frequencies.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input data (CSV parsing, dataset validation).
class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Identification cannot proceed: persistently non-exciting input.
class SingularError : public std::runtime_error {
public:
  explicit SingularError(const std::string& what) : std::runtime_error(what) {}
};

// Closed-loop simulation produced a non-finite sample.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, long sample_index)
      : std::runtime_error(what), sample_index(sample_index) {}
  long sample_index;
};

}  // namespace gfc

#endif  // GFC_ERRORS_HPP
