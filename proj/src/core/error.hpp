#pragma once

#include <stdexcept>

namespace panogeo {

// Precondition or numeric-domain violation (bad shapes, out-of-range inputs,
// degenerate data such as zero jointly-valid pixels).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Filesystem-level failure: missing file, unreadable path, short write.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Byte-level failure inside an otherwise readable file: bad magic, truncated
// payload, malformed header. Messages carry offsets/counts where known.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace panogeo
