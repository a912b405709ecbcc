#pragma once

#include <stdexcept>
#include <string>

namespace oinl {

// Base for every error raised by the library.  The category is used by the
// command-line tool to pick an exit code.
class Error : public std::runtime_error {
public:
  enum class Category { invalid_argument = 2, config = 3, numerical = 4, io = 5 };

  Error(Category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  Category category() const noexcept { return category_; }

private:
  Category category_;
};

// A physical or structural invariant of an input was violated.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& what) : Error(Category::invalid_argument, what) {}
};

class ConfigError : public Error {
public:
  ConfigError(int line, const std::string& what)
      : Error(Category::config, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  // 1-based line number, or 0 when the error concerns the document as a whole.
  int line() const noexcept { return line_; }

private:
  int line_;
};

// NaN/overflow during propagation, or an iteration that failed to converge.
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(Category::numerical, what) {}
};

class IoError : public Error {
public:
  IoError(const std::string& path, const std::string& what)
      : Error(Category::io, path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

}  // namespace oinl
