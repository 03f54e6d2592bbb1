#pragma once

#include <stdexcept>
#include <string>

namespace maslov {

// Domain failures surfaced by the library. Each maps to a named error
// condition in the operation contracts; all derive from Error so callers can
// catch the whole family. InputError covers malformed user input (files,
// configs) and maps to a distinct process exit code in the CLI.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : Error {
  using Error::Error;
};

struct NotTransversal : Error {
  using Error::Error;
};

struct SingularTransition : Error {
  using Error::Error;
};

struct SearchFailed : Error {
  using Error::Error;
};

struct EmptyIntersection : Error {
  using Error::Error;
};

struct EndpointOnCycle : Error {
  using Error::Error;
};

struct UnresolvedCrossing : Error {
  using Error::Error;
};

struct LiftFailure : Error {
  using Error::Error;
};

struct NotCritical : Error {
  using Error::Error;
};

struct DegenerateBasis : Error {
  using Error::Error;
};

struct SingularForm : Error {
  using Error::Error;
};

struct NonConvergent : Error {
  using Error::Error;
};

struct BadWindow : Error {
  using Error::Error;
};

struct UnsupportedDim : Error {
  using Error::Error;
};

}  // namespace maslov
