#pragma once

#include <stdexcept>
#include <string>

namespace x0models {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller passed arguments outside an operation's domain.
class invalid_input : public error {
 public:
  using error::error;
};

/// The level is outside the supported family: gcd(N,6) > 1, N in
/// {1,5,7,13,25}, or a fibre over p in {2,3} was requested.
class unsupported_level : public error {
 public:
  using error::error;
};

/// The finite part divides by g-1; levels of genus < 2 are refused.
class genus_too_small : public error {
 public:
  using error::error;
};

/// An internal consistency check failed (a non-integral count, a broken
/// row-sum identity, an inconsistent linear system). Indicates a bug in a
/// formula transcription, never bad user input.
class internal_error : public error {
 public:
  using error::error;
};

}  // namespace x0models
