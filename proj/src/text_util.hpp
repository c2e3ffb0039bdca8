#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace dya::detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// drops a trailing comment; '#' inside an identifier (n#1#0) is kept
inline std::string strip_comment(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '#') continue;
    const bool inside = i > 0 && (std::isalnum(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '_');
    if (!inside) return std::string(s.substr(0, i));
  }
  return std::string(s);
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

inline bool starts_with_word(std::string_view line, std::string_view word) {
  if (line.substr(0, word.size()) != word) return false;
  return line.size() == word.size() || std::isspace(static_cast<unsigned char>(line[word.size()])) ||
         line[word.size()] == ':';
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F f, std::string_view sep = ", ") {
  std::string out;
  for (const auto& x : xs) {
    if (!out.empty()) out += sep;
    out += f(x);
  }
  return out;
}

}  // namespace dya::detail
