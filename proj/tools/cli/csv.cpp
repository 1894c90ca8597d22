#include "cli/csv.hpp"

#include <cmath>
#include <cstdio>

#include "saext/errors.hpp"

namespace saext::cli {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& h : header) field(h);
  end_row();
}

std::string CsvWriter::format(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvWriter::quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

CsvWriter& CsvWriter::field(const std::string& s) {
  if (!first_) out_ << ',';
  out_ << quote(s);
  first_ = false;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format(v)); }

CsvWriter& CsvWriter::field(long long v) { return field(std::to_string(v)); }

void CsvWriter::end_row() {
  out_ << '\n';
  first_ = true;
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw IoError("failed writing " + path_.string());
  out_.close();
}

}  // namespace saext::cli
