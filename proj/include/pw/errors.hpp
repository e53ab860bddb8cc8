#ifndef PW_ERRORS_HPP_
#define PW_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pw {

enum class Errc {
  UnbalancedBracket,
  EmptyPhrase,
  OverlongSentence,
  CrossingSpans,
  DuplicateSpan,
  InvalidTree,
  BadLine,
  BadTag,
  OverlongSurface,
  EmptyLexicon,
  SpanTooLong,
  GridConflict,
  ShapeMismatch,
  MisalignedCorpora,
  EmptyCorpus,
  BadConfig,
  BadEncoding,
  IoFailure,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  // `position` is a character offset or a 1-based line number, depending on
  // the operation that raised the error.
  Error(Errc code, const std::string& message, std::size_t position);

  Errc code() const noexcept { return code_; }
  std::size_t position() const noexcept { return position_; }
  bool has_position() const noexcept { return has_position_; }

 private:
  Errc code_;
  std::size_t position_ = 0;
  bool has_position_ = false;
};

}  // namespace pw

#endif  // PW_ERRORS_HPP_
