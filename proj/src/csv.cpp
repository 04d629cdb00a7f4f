#include "ewn/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ewn/error.hpp"

namespace ewn {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(trim(field));
  return out;
}

}  // namespace

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.filename().string());
}

CsvTable CsvTable::parse(std::string_view text, std::string source) {
  CsvTable t;
  t.source_ = std::move(source);
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::size_t pos = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (trim(line).empty()) continue;
    auto fields = split_line(line);
    if (!have_header) {
      t.header_ = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header_.size())
      throw LoadError(t.source_ + " row " + std::to_string(t.rows_.size() + 1) + ": expected " +
                      std::to_string(t.header_.size()) + " fields, found " + std::to_string(fields.size()));
    t.rows_.push_back(std::move(fields));
  }
  if (!have_header) throw LoadError(t.source_ + ": missing header row");
  return t;
}

bool CsvTable::has_column(std::string_view name) const { return column_index(name) >= 0; }

int CsvTable::column_index(std::string_view name) const {
  const auto it = std::find(header_.begin(), header_.end(), name);
  return it == header_.end() ? -1 : static_cast<int>(it - header_.begin());
}

std::string CsvTable::where(std::size_t row) const { return source_ + " row " + std::to_string(row + 1); }

const std::string& CsvTable::text(std::size_t row, std::string_view column) const {
  const int c = column_index(column);
  if (c < 0) throw LoadError(source_ + ": missing column '" + std::string(column) + "'");
  return rows_.at(row)[c];
}

double CsvTable::number(std::size_t row, std::string_view column) const {
  const auto v = optional_number(row, column);
  if (!v) throw LoadError(where(row) + ": empty value in column '" + std::string(column) + "'");
  return *v;
}

long CsvTable::integer(std::size_t row, std::string_view column) const {
  const std::string& s = text(row, column);
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw LoadError(where(row) + ": '" + s + "' in column '" + std::string(column) + "' is not an integer");
  return v;
}

bool CsvTable::flag(std::size_t row, std::string_view column) const {
  const auto v = optional_flag(row, column);
  if (!v) throw LoadError(where(row) + ": empty flag in column '" + std::string(column) + "'");
  return *v;
}

std::optional<double> CsvTable::optional_number(std::size_t row, std::string_view column) const {
  if (column_index(column) < 0) return std::nullopt;
  const std::string& s = text(row, column);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = s.data() + (s[0] == '+' ? 1 : 0);
  const auto [p, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw LoadError(where(row) + ": '" + s + "' in column '" + std::string(column) + "' is not a number");
  return v;
}

std::optional<bool> CsvTable::optional_flag(std::size_t row, std::string_view column) const {
  if (column_index(column) < 0) return std::nullopt;
  std::string s = text(row, column);
  if (s.empty()) return std::nullopt;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "1" || s == "true" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "no") return false;
  throw LoadError(where(row) + ": '" + s + "' in column '" + std::string(column) + "' is not a flag");
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      out << f;
      continue;
    }
    out << '"';
    for (char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

}  // namespace ewn
