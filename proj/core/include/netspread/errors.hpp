#pragma once

#include <stdexcept>
#include <string>

namespace netspread {

/// Malformed or inconsistent input files.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An analysis precondition failed (disconnected view, singular design, ...).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writing an output artifact failed.
class EmissionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netspread
