#pragma once

#include <stdexcept>
#include <string>

namespace qt {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mixing elements or sets from different groups.
struct TagMismatchError : Error {
  using Error::Error;
};

// Operation requires a nonempty set or a parameter in range.
struct PreconditionError : Error {
  using Error::Error;
};

// A dyadic / index search exhausted its configured bound.
struct InfeasibleError : Error {
  using Error::Error;
};

// Cylinder cover could not be separated for the requested set.
struct SeparationError : Error {
  using Error::Error;
};

// A quasitiling violates its structural invariants.
struct CorruptTilingError : Error {
  using Error::Error;
};

// Malformed config, dump or pattern file.
struct InputError : Error {
  using Error::Error;
};

}  // namespace qt
