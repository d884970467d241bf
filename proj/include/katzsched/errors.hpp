#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace katzsched {

// Input-format failure, carries the source file and 1-based line number.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::string file, std::size_t line, const std::string &what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(std::move(file)), line_(line) {}

    const std::string &file() const { return file_; }
    std::size_t line() const { return line_; }

  private:
    std::string file_;
    std::size_t line_;
};

class UnknownNodeError : public std::runtime_error {
  public:
    explicit UnknownNodeError(std::uint64_t id)
        : std::runtime_error("unknown node id " + std::to_string(id)) {}
};

class UnknownSeedError : public std::runtime_error {
  public:
    explicit UnknownSeedError(std::uint64_t id)
        : std::runtime_error("unknown seed id " + std::to_string(id)) {}
};

// Raised when a horizon graph is requested before any coverage exists
// (no visited region implies no horizon). Callers are expected to fall
// back to uniform scheduling.
class NoCoverageError : public std::runtime_error {
  public:
    NoCoverageError() : std::runtime_error("corpus has no coverage yet") {}
};

// (I - alpha*A) is singular, i.e. alpha >= 1/lambda_max.
class SingularSystemError : public std::runtime_error {
  public:
    SingularSystemError()
        : std::runtime_error("I - alpha*A is singular; alpha >= 1/lambda_max") {}
};

// Centrality vector does not cover the current seed set.
class StaleCentralityError : public std::runtime_error {
  public:
    StaleCentralityError()
        : std::runtime_error("centrality is stale: seed set mismatch") {}
};

} // namespace katzsched
