#ifndef FUNCVB_ERRORS_HPP_
#define FUNCVB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace funcvb {

// Invalid basis definition (count < order, degenerate domain, bad knots).
class BasisError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Evaluation point outside the basis domain, or argument outside a
// function's domain (e.g. digamma at x <= 0).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Dimension mismatch between inputs.
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure inside an iterative fit. Carries the iteration at
// which the failure was detected (0-based).
class NumericError : public std::runtime_error {
public:
  NumericError(const std::string& what, int iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

private:
  int iteration_;
};

// Malformed input file. Carries 1-based row/column when known.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, long row = -1, long column = -1)
      : std::runtime_error(format(what, row, column)), row_(row), column_(column) {}
  long row() const { return row_; }
  long column() const { return column_; }

private:
  static std::string format(const std::string& what, long row, long column) {
    std::string s = what;
    if (row >= 0) s += " at row " + std::to_string(row);
    if (column >= 0) s += ", column " + std::to_string(column);
    return s;
  }
  long row_;
  long column_;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace funcvb

#endif  // FUNCVB_ERRORS_HPP_
