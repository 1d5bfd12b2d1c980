#pragma once

// Minimal CSV emit/parse for the simulator's numeric tables. Fields never
// contain separators, so no quoting is needed.

#include <charconv>
#include <concepts>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace hapsim {

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((emit(fields, first)), ...);
    os_ << '\n';
  }

 private:
  template <typename T>
  void emit(const T& value, bool& first) {
    if (!first) os_ << ',';
    first = false;
    if constexpr (std::floating_point<T>) {
      // Shortest round-trip form: stable across runs.
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof(buf), value);
      os_.write(buf, res.ptr - buf);
    } else {
      os_ << value;
    }
  }

  std::ostream& os_;
};

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Parses a whole-field number; returns false on trailing garbage.
template <typename T>
bool parse_number(std::string_view text, T& out) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

}  // namespace hapsim
