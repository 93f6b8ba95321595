#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mobkit {

// --- CSV primitives ------------------------------------------------------
// Fields never contain commas or quotes in any of our formats, so a plain
// comma split is sufficient. Trailing CR (CRLF input) is stripped.

inline void split_csv_line(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  size_t start = 0;
  while (true) {
    size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Iterates lines of a buffer without copying; skips a trailing empty line.
template <typename Fn>
inline void for_each_line(std::string_view text, Fn&& fn) {
  size_t start = 0;
  while (start < text.size()) {
    size_t pos = text.find('\n', start);
    if (pos == std::string_view::npos) {
      fn(text.substr(start));
      break;
    }
    fn(text.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::optional<double> parse_f64(std::string_view s) {
  double v;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<int64_t> parse_i64(std::string_view s) {
  int64_t v;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Fixed-decimal formatting; the CSV writers use this everywhere so identical
// data always serializes to identical bytes.
inline std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

// Shortest-ish general format for statistics (p-values can be ~1e-300).
inline std::string fmt_sig(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

// --- files ---------------------------------------------------------------

std::string read_file(const std::string& path);           // throws io_error
void write_file(const std::string& path, std::string_view content);
bool file_exists(const std::string& path);
void ensure_dir(const std::string& path);                 // mkdir -p

}  // namespace mobkit
