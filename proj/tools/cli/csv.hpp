#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace saext::cli {

/// RFC 4180 style writer: comma separated, CRLF-free, fields quoted only when
/// needed, reals with 17 significant digits.
class CsvWriter {
 public:
  /// Opens (truncates) the file; throws IoError on failure.
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& field(const std::string& s);
  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& empty() { return field(std::string()); }
  /// Terminates the current record.
  void end_row();
  /// Flushes and checks the stream; throws IoError on failure.
  void close();

  static std::string format(double v);
  static std::string quote(const std::string& s);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace saext::cli
