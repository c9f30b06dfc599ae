// Copyright 2026 the emojipred authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace emojipred {

// Error categories surfaced by the CLI as machine-parsable codes.
enum class ErrorKind {
  Io,
  Config,
  Format,
  Unicode,
  Shape,
  Numeric,
  Checkpoint,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return "E_IO";
    case ErrorKind::Config: return "E_CONFIG";
    case ErrorKind::Format: return "E_FORMAT";
    case ErrorKind::Unicode: return "E_UNICODE";
    case ErrorKind::Shape: return "E_SHAPE";
    case ErrorKind::Numeric: return "E_NUMERIC";
    case ErrorKind::Checkpoint: return "E_CHECKPOINT";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace emojipred
