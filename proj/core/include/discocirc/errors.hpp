#pragma once

#include <stdexcept>
#include <string>

namespace discocirc {

/// Base class for every error raised by the compiler pipeline.  `kind()` is the
/// stable error name printed by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define DISCOCIRC_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  }

/// Malformed input; the message carries the line or field location.
DISCOCIRC_DEFINE_ERROR(FormatError);
DISCOCIRC_DEFINE_ERROR(InvalidDiagram);
DISCOCIRC_DEFINE_ERROR(NoParse);
DISCOCIRC_DEFINE_ERROR(EmptySentence);
DISCOCIRC_DEFINE_ERROR(ChainMismatch);
DISCOCIRC_DEFINE_ERROR(NotACoordination);
DISCOCIRC_DEFINE_ERROR(CapExceeded);
DISCOCIRC_DEFINE_ERROR(UnexpandedFrame);
DISCOCIRC_DEFINE_ERROR(ZeroNorm);
DISCOCIRC_DEFINE_ERROR(UnboundSymbol);
DISCOCIRC_DEFINE_ERROR(TrainingError);

#undef DISCOCIRC_DEFINE_ERROR

}  // namespace discocirc
