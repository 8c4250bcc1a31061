#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uiss {

// Base of every library error. category() is a short machine-readable tag
// that the CLI prints on failure.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)) {}
  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error("validation", what) {}
};

// Raised when a projection has no unique answer (rank-deficient input).
class DegenerateInputError : public Error {
 public:
  DegenerateInputError(const std::string& what, std::size_t rank)
      : Error("degenerate", what), rank_(rank) {}
  std::size_t numerical_rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

class SingularSystemError : public Error {
 public:
  explicit SingularSystemError(const std::string& what) : Error("singular", what) {}
};

class GenerationError : public Error {
 public:
  explicit GenerationError(const std::string& what) : Error("generation", what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error("parse", source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace uiss
