#include "pw/utf8.hpp"

#include <cstdint>

#include "pw/errors.hpp"

namespace pw {

namespace {

bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    unsigned char b0 = static_cast<unsigned char>(bytes[i]);
    char32_t cp = 0;
    std::size_t n = 0;
    if (b0 < 0x80) {
      cp = b0;
      n = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      n = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      n = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      n = 4;
    } else {
      throw Error(Errc::BadEncoding, "invalid UTF-8 lead byte", i);
    }
    if (i + n > bytes.size()) {
      throw Error(Errc::BadEncoding, "truncated UTF-8 sequence", i);
    }
    for (std::size_t k = 1; k < n; ++k) {
      unsigned char bk = static_cast<unsigned char>(bytes[i + k]);
      if (!is_continuation(bk)) {
        throw Error(Errc::BadEncoding, "invalid UTF-8 continuation byte", i);
      }
      cp = (cp << 6) | (bk & 0x3F);
    }
    static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (n > 1 && cp < kMinByLen[n]) {
      throw Error(Errc::BadEncoding, "overlong UTF-8 sequence", i);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw Error(Errc::BadEncoding, "code point out of range", i);
    }
    out.push_back(cp);
    i += n;
  }
  return out;
}

std::string encode_utf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (c >> 18));
    out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
  return out;
}

std::string encode_utf8(std::u32string_view chars) {
  std::string out;
  out.reserve(chars.size() * 3);
  for (char32_t c : chars) out += encode_utf8(c);
  return out;
}

}  // namespace pw
