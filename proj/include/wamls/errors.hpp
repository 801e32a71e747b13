#pragma once

#include <stdexcept>
#include <string>

namespace wamls {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Enumeration cap exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

// An extension oracle returned a set violating its declared contract.
class OracleContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wamls
