#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imexstab {

/// 17 significant digits, '.' decimal separator, locale-independent.
std::string format_double(double v);
/// Shortest decimal form that reads back to the same double ("0.1", "1e-05").
std::string format_shortest(double v);

/// Ordered key/value list written as the first line of every CSV artifact:
/// `# key=value,key=value,...`.
using ParamList = std::vector<std::pair<std::string, std::string>>;

/// Minimal RFC-4180-style writer ('\n' line endings, fields quoted only when
/// they contain a comma, quote, or newline).
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const ParamList& params,
            std::initializer_list<std::string_view> columns);

  CsvWriter& field(std::string_view s);
  CsvWriter& field(const char* s) { return field(std::string_view(s)); }
  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(std::size_t v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(bool v) { return field(std::string_view(v ? "true" : "false")); }
  void end_row();
  /// Comment line starting with '#', e.g. a blow-up marker.
  void comment(std::string_view text);

 private:
  std::ofstream out_;
  bool row_started_ = false;
};

std::string csv_escape(std::string_view s);

}  // namespace imexstab
