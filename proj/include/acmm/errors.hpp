#pragma once

#include <stdexcept>
#include <string>

namespace acmm {

// Base of every precondition error thrown by the library.  Decoder failures
// are not errors; they are reported through DecodeOutcome::failed.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DistinctnessViolation : public Error {
 public:
  using Error::Error;
};

class IndexViolation : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class ShapeViolation : public Error {
 public:
  using Error::Error;
};

class InsufficientResults : public Error {
 public:
  using Error::Error;
};

class EpsilonRange : public Error {
 public:
  using Error::Error;
};

// CodeParams / FailurePlan / TrainConfig invariant broken.
class ParameterViolation : public Error {
 public:
  using Error::Error;
};

// File missing or unreadable.
class IoError : public Error {
 public:
  using Error::Error;
};

// File readable but malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace acmm
