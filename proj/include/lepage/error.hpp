#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lepage {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed DSL input. `offset` is the byte position of the offending token.
struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : Error(msg + " at byte " + std::to_string(off)), offset(off) {}
};

/// Evaluation outside the domain (negative sqrt, zero denominator, overflow).
struct DomainError : Error {
  using Error::Error;
};

/// Normalization produced more nodes than LEPAGE_NODE_CAP allows.
struct ExprSizeError : Error {
  using Error::Error;
};

struct UnsupportedOrder : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace lepage
