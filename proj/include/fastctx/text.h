#ifndef FASTCTX_TEXT_H_
#define FASTCTX_TEXT_H_

#include <string>
#include <string_view>

namespace fastctx {

// ASCII-only case folding; bytes >= 0x80 pass through unchanged.
inline char ToLowerAscii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string ToLowerAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ToLowerAscii(c);
  return out;
}

inline bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline bool ContainsSpace(std::string_view s) {
  for (char c : s) {
    if (IsAsciiSpace(c)) return true;
  }
  return false;
}

inline std::string_view TrimAscii(std::string_view s) {
  while (!s.empty() && IsAsciiSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsAsciiSpace(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace fastctx

#endif  // FASTCTX_TEXT_H_
