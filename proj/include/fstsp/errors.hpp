#pragma once

#include <stdexcept>
#include <string>

namespace fstsp {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file; message carries file name and line where known.
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid input with bad content: dimension mismatch, negative
// times, out-of-range node ids, bad parameter combinations.
struct DataError : Error {
  using Error::Error;
};

// Exact methods refusing an instance above their size cap.
struct SizeError : Error {
  using Error::Error;
};

// API misuse: an operation was handed a solution or move that violates its
// preconditions. Never silent.
struct ContractViolation : Error {
  using Error::Error;
};

// Filesystem trouble (missing file, unwritable path).
struct IoError : Error {
  using Error::Error;
};

}  // namespace fstsp
