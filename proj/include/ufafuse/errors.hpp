#pragma once

#include <stdexcept>
#include <string>

namespace ufafuse {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Incompatible tensor/image dimensions.
struct ShapeError : Error {
    using Error::Error;
};

// Argument outside its contract (bad mode, bad range, non-binary map, ...).
struct ValueError : Error {
    using Error::Error;
};

// Filesystem-level failure (missing file, unwritable directory).
struct IoError : Error {
    using Error::Error;
};

// Malformed file content; message carries the byte offset where known.
struct ParseError : IoError {
    using IoError::IoError;
};

}  // namespace ufafuse
