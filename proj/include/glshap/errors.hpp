#ifndef GLSHAP_ERRORS_HPP
#define GLSHAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace glshap {

// Bad numeric input: NaN/Inf factors, empty games, malformed models.
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& msg) : std::invalid_argument(msg) {}
};

// Budget / rule order out of the supported range.
class budget_error : public std::invalid_argument {
 public:
  explicit budget_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Mismatched shapes (factor count vs. model dimension etc).
class dimension_mismatch : public std::invalid_argument {
 public:
  explicit dimension_mismatch(const std::string& msg) : std::invalid_argument(msg) {}
};

// File / JSON / CSV problems. Carries a position when one is known.
class parse_error : public std::runtime_error {
 public:
  explicit parse_error(const std::string& msg, long row = -1, long col = -1)
      : std::runtime_error(format(msg, row, col)), row_(row), col_(col) {}
  long row() const { return row_; }
  long col() const { return col_; }

 private:
  static std::string format(const std::string& msg, long row, long col) {
    std::string s = msg;
    if (row >= 0) s += " (row " + std::to_string(row) + ")";
    if (col >= 0) s += " (col " + std::to_string(col) + ")";
    return s;
  }
  long row_;
  long col_;
};

}  // namespace glshap

#endif
