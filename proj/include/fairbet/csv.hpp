#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace fairbet::csv {

// RFC-4180 field quoting: fields containing comma, quote, CR or LF are
// quoted with internal quotes doubled.
std::string escape(const std::string& field);

// Formats a double with 17 significant digits (exact round-trip, stable
// byte output across runs).
std::string format(double v);
std::string format(std::int64_t v);

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

// Minimal RFC-4180 reader: handles quoted fields, doubled quotes, CRLF and
// LF line endings. Returns one record per row; empty input yields no rows.
std::vector<std::vector<std::string>> read_file(const std::string& path);
std::vector<std::vector<std::string>> parse(const std::string& text);

}  // namespace fairbet::csv
