#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lcdm {

// Error taxonomy mirrors the CLI exit codes:
//   ParseError     -> 2  (malformed input file)
//   SemanticError  -> 3  (invalid arguments / configuration)
//   NumericalError -> 4  (degenerate numerics: zero variance, NaN, ...)
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  ParseError(std::string file_, std::size_t line_, const std::string& what_)
      : Error(file_ + ":" + std::to_string(line_) + ": " + what_),
        file(std::move(file_)),
        line(line_) {}
  std::string file;
  std::size_t line = 0;
};

struct SemanticError : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

}  // namespace lcdm
