#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace patmine {

enum class Severity { Warning, Error };

/// One validation finding, tied to the corpus location that caused it.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string sdm_id;
  std::string activity_id;
  std::string message;

  std::string to_string() const;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Joins error-severity diagnostics into one newline-separated message.
std::string error_summary(const std::vector<Diagnostic>& diagnostics);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem-level failure: missing path, unreadable file, failed write.
struct IoError : Error {
  using Error::Error;
};

/// Document is not parseable as the expected format.
struct ParseError : Error {
  using Error::Error;
};

/// Document parsed but violates a schema or model invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// Bad run configuration (thresholds, frame mode prerequisites).
struct ConfigError : Error {
  using Error::Error;
};

/// A split rule cannot be applied to the activity it matched.
struct RuleError : Error {
  using Error::Error;
};

}  // namespace patmine
