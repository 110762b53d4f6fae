#pragma once

#include <stdexcept>
#include <string>

namespace adhocnet {

enum class ConfigErrorKind { kUnknownKey, kOutOfRange, kMissingRegion, kBadValue };

inline const char* to_string(ConfigErrorKind k) {
  switch (k) {
    case ConfigErrorKind::kUnknownKey: return "unknown-key";
    case ConfigErrorKind::kOutOfRange: return "out-of-range";
    case ConfigErrorKind::kMissingRegion: return "missing-region";
    case ConfigErrorKind::kBadValue: return "bad-value";
  }
  return "?";
}

// Invalid configuration: unknown key, malformed value, out-of-range field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what,
                       ConfigErrorKind kind = ConfigErrorKind::kBadValue)
      : std::runtime_error(what), kind_(kind) {}

  ConfigErrorKind kind() const { return kind_; }

 private:
  ConfigErrorKind kind_;
};

// File could not be read or written; the message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown during learning (non-finite loss or gradient).
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace adhocnet
