#include "pw/errors.hpp"

namespace pw {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::UnbalancedBracket: return "UnbalancedBracket";
    case Errc::EmptyPhrase:       return "EmptyPhrase";
    case Errc::OverlongSentence:  return "OverlongSentence";
    case Errc::CrossingSpans:     return "CrossingSpans";
    case Errc::DuplicateSpan:     return "DuplicateSpan";
    case Errc::InvalidTree:       return "InvalidTree";
    case Errc::BadLine:           return "BadLine";
    case Errc::BadTag:            return "BadTag";
    case Errc::OverlongSurface:   return "OverlongSurface";
    case Errc::EmptyLexicon:      return "EmptyLexicon";
    case Errc::SpanTooLong:       return "SpanTooLong";
    case Errc::GridConflict:      return "GridConflict";
    case Errc::ShapeMismatch:     return "ShapeMismatch";
    case Errc::MisalignedCorpora: return "MisalignedCorpora";
    case Errc::EmptyCorpus:       return "EmptyCorpus";
    case Errc::BadConfig:         return "BadConfig";
    case Errc::BadEncoding:       return "BadEncoding";
    case Errc::IoFailure:         return "IoFailure";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

Error::Error(Errc code, const std::string& message, std::size_t position)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message +
                         " (at " + std::to_string(position) + ")"),
      code_(code),
      position_(position),
      has_position_(true) {}

}  // namespace pw
