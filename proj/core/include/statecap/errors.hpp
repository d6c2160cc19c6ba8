#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace statecap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A frame index or window lies outside its clip.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument lies outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A record violates a data invariant (bad range, unknown clip, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Two records claim the same identity.
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// An operation that needs at least one element received none.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// The clip has fewer frames than the requested window length.
class ClipTooShortError : public Error {
 public:
  using Error::Error;
};

/// Every window start position overlaps at least one PNR frame.
class NegativeSpaceEmptyError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Predictions and annotations do not cover the same clips.
class CoverageError : public Error {
 public:
  CoverageError(std::vector<std::string> missing, std::vector<std::string> unexpected);

  const std::vector<std::string>& missing() const noexcept { return missing_; }
  const std::vector<std::string>& unexpected() const noexcept { return unexpected_; }

 private:
  std::vector<std::string> missing_;
  std::vector<std::string> unexpected_;
};

}  // namespace statecap
