#pragma once

#include <stdexcept>
#include <string>

namespace cloze {

struct ClozeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownExtractor : ClozeError {
  explicit UnknownExtractor(const std::string& name)
      : ClozeError("unknown extractor plugin: " + name) {}
};

struct ExtractorFailure : ClozeError {
  using ClozeError::ClozeError;
};

struct InvalidK : ClozeError {
  explicit InvalidK(int k) : ClozeError("k must be >= 1, got " + std::to_string(k)) {}
};

struct NoFactors : ClozeError {
  using ClozeError::ClozeError;
};

// Remote transport failure; safe to retry.
struct BackendUnavailable : ClozeError {
  using ClozeError::ClozeError;
};

// Protocol violation from a backend; not retriable.
struct MalformedResponse : ClozeError {
  using ClozeError::ClozeError;
};

struct CacheCorrupt : ClozeError {
  using ClozeError::ClozeError;
};

struct FillMismatch : ClozeError {
  using ClozeError::ClozeError;
};

struct DegenerateInput : ClozeError {
  using ClozeError::ClozeError;
};

struct InsufficientFactors : ClozeError {
  using ClozeError::ClozeError;
};

struct DatasetParseError : ClozeError {
  DatasetParseError(const std::string& path, std::size_t line, const std::string& what)
      : ClozeError(path + ":" + std::to_string(line) + ": " + what), line_number(line) {}
  std::size_t line_number;
};

}  // namespace cloze
