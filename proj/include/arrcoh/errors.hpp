#ifndef ARRCOH_ERRORS_HPP
#define ARRCOH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arrcoh {

/// Malformed input text; line and column are 1-based (column 0 = whole line).
class ParseError : public std::runtime_error
{
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) +
                             (column ? ", column " + std::to_string(column) : std::string()) + ": " + what),
          line_(line), column_(column)
    {
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// Structurally valid input that violates a model invariant (zero normal, duplicate, ...).
class ValidationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class CapExceeded : public std::runtime_error
{
  public:
    CapExceeded(std::size_t requested, std::size_t cap, const std::string& what = "hyperplanes")
        : std::runtime_error("enumeration cap exceeded: " + std::to_string(requested) + " " + what +
                             ", cap is " + std::to_string(cap)),
          requested_(requested), cap_(cap)
    {
    }

    std::size_t requested() const { return requested_; }
    std::size_t cap() const { return cap_; }

  private:
    std::size_t requested_;
    std::size_t cap_;
};

/// A numerical consequence of the spectral-sequence argument failed on this input.
class InconsistencyError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}   // namespace arrcoh

#endif
