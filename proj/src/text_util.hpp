#pragma once

#include <cstdio>
#include <string>
#include <string_view>

namespace patmine::detail {

/// Lowercase alphanumeric runs joined by '-'.
inline std::string slugify(std::string_view text) {
  std::string out;
  bool pending_dash = false;
  for (char raw : text) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      if (pending_dash && !out.empty()) out.push_back('-');
      pending_dash = false;
      out.push_back(c);
    } else {
      pending_dash = true;
    }
  }
  return out;
}

/// Fixed three-decimal rendering for scores in logs and reports.
inline std::string fmt_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

inline std::string title_case(std::string word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') {
    word[0] = static_cast<char>(word[0] - 'a' + 'A');
  }
  return word;
}

}  // namespace patmine::detail
