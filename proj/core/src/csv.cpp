#include "imexstab/csv.hpp"

#include "imexstab/errors.hpp"

#include <charconv>
#include <cmath>

namespace imexstab {

std::string format_double(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_shortest(double v) {
  if (!std::isfinite(v)) {
    return format_double(v);
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const ParamList& params,
                     std::initializer_list<std::string_view> columns)
    : out_(path, std::ios::binary) {
  if (!out_) {
    throw ConfigError("cannot open " + path.string() + " for writing");
  }
  out_ << '#';
  bool first = true;
  for (const auto& [k, v] : params) {
    out_ << (first ? " " : ",") << k << '=' << v;
    first = false;
  }
  out_ << '\n';
  for (auto c : columns) {
    field(c);
  }
  end_row();
}

CsvWriter& CsvWriter::field(std::string_view s) {
  if (row_started_) {
    out_ << ',';
  }
  out_ << csv_escape(s);
  row_started_ = true;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::field(long long v) { return field(std::string_view(std::to_string(v))); }

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

void CsvWriter::comment(std::string_view text) {
  if (row_started_) {
    end_row();
  }
  out_ << "# " << text << '\n';
}

}  // namespace imexstab
