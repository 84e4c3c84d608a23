#include "bclab/csv.hpp"

#include <charconv>
#include <cmath>

namespace bclab {

std::string CsvWriter::format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string CsvWriter::quote(const std::string& raw) {
  bool needs = raw.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return raw;
  std::string q = "\"";
  for (char c : raw) {
    if (c == '"') q += "\"\"";
    else q += c;
  }
  q += '"';
  return q;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote(names[i]);
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Field>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    if (std::holds_alternative<std::string>(fields[i]))
      out_ << quote(std::get<std::string>(fields[i]));
    else if (std::holds_alternative<double>(fields[i]))
      out_ << format_double(std::get<double>(fields[i]));
    else
      out_ << std::get<std::int64_t>(fields[i]);
  }
  out_ << '\n';
}

}  // namespace bclab
