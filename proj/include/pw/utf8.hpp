#ifndef PW_UTF8_HPP_
#define PW_UTF8_HPP_

#include <string>
#include <string_view>

namespace pw {

// The pipeline indexes sentences by Unicode scalar value, never by byte.
// These two helpers are the only place byte-level encoding is handled.

// Throws Error{BadEncoding} with the byte offset of the offending sequence.
std::u32string decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view chars);
std::string encode_utf8(char32_t c);

}  // namespace pw

#endif  // PW_UTF8_HPP_
