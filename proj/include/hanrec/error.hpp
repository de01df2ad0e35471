#pragma once

#include <stdexcept>
#include <string>

namespace hanrec {

// Error codes carried by every hanrec exception. Each code belongs to one
// of three classes, which the CLI maps to exit statuses:
//   config errors -> 1, data errors -> 2, internal invariant failures -> 3.
enum class Errc {
  // configuration / usage
  ConfigInvalid,
  MissingCategory,
  UnloadableFont,
  ContrastUnsatisfiable,
  SpatialUnderflow,
  // data
  IoFailure,
  ParseError,
  MissingImage,
  GlyphMissing,
  PatchTooSmall,
  NonArtificialRecord,
  UnknownLabel,
  EmptyDataset,
  VocabularyMismatch,
  // internal
  ShapeMismatch,
  DegenerateQuad,
  SingularTransform,
  LabelOutOfRange,
  Internal,
};

inline int exit_class(Errc c) {
  switch (c) {
    case Errc::ConfigInvalid:
    case Errc::MissingCategory:
    case Errc::UnloadableFont:
    case Errc::ContrastUnsatisfiable:
    case Errc::SpatialUnderflow:
      return 1;
    case Errc::IoFailure:
    case Errc::ParseError:
    case Errc::MissingImage:
    case Errc::GlyphMissing:
    case Errc::PatchTooSmall:
    case Errc::NonArtificialRecord:
    case Errc::UnknownLabel:
    case Errc::EmptyDataset:
    case Errc::VocabularyMismatch:
      return 2;
    default:
      return 3;
  }
}

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::MissingCategory: return "MissingCategory";
    case Errc::UnloadableFont: return "UnloadableFont";
    case Errc::ContrastUnsatisfiable: return "ContrastUnsatisfiable";
    case Errc::SpatialUnderflow: return "SpatialUnderflow";
    case Errc::IoFailure: return "IoFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingImage: return "MissingImage";
    case Errc::GlyphMissing: return "GlyphMissing";
    case Errc::PatchTooSmall: return "PatchTooSmall";
    case Errc::NonArtificialRecord: return "NonArtificialRecord";
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::VocabularyMismatch: return "VocabularyMismatch";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::DegenerateQuad: return "DegenerateQuad";
    case Errc::SingularTransform: return "SingularTransform";
    case Errc::LabelOutOfRange: return "LabelOutOfRange";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }
  int exit_status() const { return exit_class(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace hanrec
