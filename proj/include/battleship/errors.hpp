#pragma once

#include <stdexcept>
#include <string>

namespace battleship {

// Every error thrown by this library derives from Error so callers can
// catch domain failures without swallowing std::bad_alloc and friends.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed game configs, board files, or boards with no consistent completion.
struct BoardError : Error {
  using Error::Error;
};

// Program text that does not lex/parse. `position` is a 0-based byte offset
// into the source string.
struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// Well-formed program that does not typecheck.
struct TypeError : Error {
  using Error::Error;
};

// Runtime domain error while evaluating a program against one board, e.g.
// topleft of an empty set. Scoring treats the program as invalid for the
// hypothesis space rather than aborting.
struct EvalError : Error {
  using Error::Error;
};

// Grammar sampling exhausted its rejection budget.
struct SamplingError : Error {
  using Error::Error;
};

// Chat completion providers: transport failures, bad payloads, missing
// replay fixtures.
struct ProviderError : Error {
  using Error::Error;
};

// Bad function arguments that are not tied to a specific input file.
struct InputError : Error {
  using Error::Error;
};

}  // namespace battleship
