#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ewn {

/// A header-addressed CSV table. Fields are trimmed; double quotes may
/// enclose a field containing commas.
class CsvTable {
 public:
  static CsvTable read(const std::filesystem::path& path);
  static CsvTable parse(std::string_view text, std::string source = "<memory>");

  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  bool has_column(std::string_view name) const;

  /// Throws LoadError naming the file when the column is absent.
  const std::string& text(std::size_t row, std::string_view column) const;
  double number(std::size_t row, std::string_view column) const;
  long integer(std::size_t row, std::string_view column) const;
  bool flag(std::size_t row, std::string_view column) const;

  /// Empty or absent fields yield nullopt.
  std::optional<double> optional_number(std::size_t row, std::string_view column) const;
  std::optional<bool> optional_flag(std::size_t row, std::string_view column) const;

  /// "file.csv row N" for error messages, N counting data rows from 1.
  std::string where(std::size_t row) const;

 private:
  int column_index(std::string_view name) const;
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Writes rows of already-formatted fields, quoting fields that need it.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace ewn
