#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace bclab {

// RFC-4180 CSV writer. Doubles are printed with shortest round-trip
// formatting so reruns produce byte-identical files.
class CsvWriter {
 public:
  using Field = std::variant<std::string, double, std::int64_t>;

  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names);
  void row(const std::vector<Field>& fields);

  static std::string format_double(double v);
  static std::string quote(const std::string& raw);

 private:
  std::ostream& out_;
};

}  // namespace bclab
