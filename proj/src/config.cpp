#include "ewn/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ewn/csv.hpp"
#include "ewn/error.hpp"

namespace ewn {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  Reader(std::string source) : source_(std::move(source)) {}
  std::string where(int line) const { return source_ + " line " + std::to_string(line); }

  double number(const std::string& v, int line) const {
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw LoadError(where(line) + ": '" + v + "' is not a number");
    return x;
  }
  long integer(const std::string& v, int line) const {
    long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      throw LoadError(where(line) + ": '" + v + "' is not an integer");
    return x;
  }
  std::uint64_t unsigned_integer(const std::string& v, int line) const {
    std::uint64_t x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      throw LoadError(where(line) + ": '" + v + "' is not an unsigned integer");
    return x;
  }
  bool flag(const std::string& v, int line) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw LoadError(where(line) + ": '" + v + "' is not a boolean");
  }

 private:
  std::string source_;
};

bool set_class(ClassForecast& f, const std::string& field, const std::string& v, int line, const Reader& rd) {
  if (field == "penetration") f.penetration = rd.number(v, line);
  else if (field == "capacity_factor") f.capacity_factor = rd.number(v, line);
  else if (field == "variability") f.variability = rd.number(v, line);
  else if (field == "mae_day_ahead") f.mae_day_ahead = rd.number(v, line);
  else if (field == "mae_short_term") f.mae_short_term = rd.number(v, line);
  else return false;
  return true;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir, const std::string& source) {
  ScenarioConfig c;
  const Reader rd(source);
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  bool have_case = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw LoadError(rd.where(line) + ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq)), v = trim(body.substr(eq + 1));
    if (key.empty() || v.empty()) throw LoadError(rd.where(line) + ": expected 'key = value'");
    if (auto [it, fresh] = seen.emplace(key, line); !fresh)
      throw LoadError(rd.where(line) + ": key '" + key + "' already set on line " + std::to_string(it->second));

    const auto dot = key.find('.');
    const std::string head = key.substr(0, dot), field = dot == std::string::npos ? "" : key.substr(dot + 1);
    bool ok = true;
    if (key == "name") c.name = v;
    else if (key == "case") {
      c.case_path = std::filesystem::path(v).is_absolute() ? std::filesystem::path(v) : (base_dir / v).lexically_normal();
      have_case = true;
    } else if (key == "output") c.output_dir = std::filesystem::path(v).is_absolute() ? std::filesystem::path(v) : (base_dir / v).lexically_normal();
    else if (key == "start_day") c.start_day = static_cast<int>(rd.integer(v, line));
    else if (key == "days") c.days = static_cast<int>(rd.integer(v, line));
    else if (key == "seed") c.seed = rd.unsigned_integer(v, line);
    else if (key == "hydro_curtailable") c.flex.hydro_curtailable = rd.flag(v, line);
    else if (key == "water_dr_enabled") c.flex.water_dr_enabled = rd.flag(v, line);
    else if (key == "histogram_bins") c.histogram_bins = static_cast<int>(rd.integer(v, line));
    else if (key == "minute_log") {
      if (v == "csv") c.minute_log = MinuteLog::csv;
      else if (v == "binary") c.minute_log = MinuteLog::binary;
      else if (v == "none") c.minute_log = MinuteLog::none;
      else throw LoadError(rd.where(line) + ": minute_log must be csv, binary or none");
    } else if (key == "flexibility") {
      if (v == "flexible") c.flex = FlexibilityFlags::flexible();
      else if (v == "conventional") c.flex = FlexibilityFlags::conventional();
      else throw LoadError(rd.where(line) + ": flexibility must be flexible or conventional");
    } else if (head == "wind") ok = set_class(c.wind, field, v, line, rd);
    else if (head == "solar") ok = set_class(c.solar, field, v, line, rd);
    else if (head == "hydro") ok = set_class(c.hydro, field, v, line, rd);
    else if (head == "load")
      ok = (field == "mae_day_ahead" || field == "mae_short_term") && set_class(c.load, field, v, line, rd);
    else if (head == "system") {
      SystemConfig probe;
      ok = set_system_key(probe, field, rd.number(v, line));
      if (ok) c.system_overrides.emplace_back(field, rd.number(v, line));
    } else if (head == "mip") {
      if (field == "gap_limit") c.mip.gap_limit = rd.number(v, line);
      else if (field == "node_limit") c.mip.node_limit = rd.integer(v, line);
      else if (field == "segments") c.mip.segments = static_cast<int>(rd.integer(v, line));
      else if (field == "dive_heuristic") c.mip.dive_heuristic = rd.flag(v, line);
      else ok = false;
    } else ok = false;
    if (!ok) throw LoadError(rd.where(line) + ": unknown key '" + key + "'");
  }
  if (!have_case) throw LoadError(source + ": missing required key 'case'");
  if (c.days < 1) throw LoadError(source + ": days must be at least 1");
  if (c.start_day < 0) throw LoadError(source + ": start_day must be nonnegative");
  if (c.histogram_bins < 1) throw LoadError(source + ": histogram_bins must be at least 1");
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path(), path.string());
}

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream o;
  auto b = [](bool v) { return v ? "true" : "false"; };
  o << "name = " << c.name << '\n'
    << "case = " << c.case_path.string() << '\n'
    << "output = " << c.output_dir.string() << '\n'
    << "start_day = " << c.start_day << '\n'
    << "days = " << c.days << '\n'
    << "seed = " << c.seed << '\n'
    << "hydro_curtailable = " << b(c.flex.hydro_curtailable) << '\n'
    << "water_dr_enabled = " << b(c.flex.water_dr_enabled) << '\n'
    << "histogram_bins = " << c.histogram_bins << '\n'
    << "minute_log = "
    << (c.minute_log == MinuteLog::csv ? "csv" : c.minute_log == MinuteLog::binary ? "binary" : "none") << '\n';
  auto cls = [&](const char* name, const ClassForecast& f, bool with_pen) {
    if (with_pen && f.penetration) o << name << ".penetration = " << format_double(*f.penetration) << '\n';
    if (with_pen) {
      o << name << ".capacity_factor = " << format_double(f.capacity_factor) << '\n'
        << name << ".variability = " << format_double(f.variability) << '\n';
    }
    o << name << ".mae_day_ahead = " << format_double(f.mae_day_ahead) << '\n'
      << name << ".mae_short_term = " << format_double(f.mae_short_term) << '\n';
  };
  cls("wind", c.wind, true);
  cls("solar", c.solar, true);
  cls("hydro", c.hydro, true);
  cls("load", c.load, false);
  for (const auto& [k, v] : c.system_overrides) o << "system." << k << " = " << format_double(v) << '\n';
  o << "mip.gap_limit = " << format_double(c.mip.gap_limit) << '\n'
    << "mip.node_limit = " << c.mip.node_limit << '\n'
    << "mip.segments = " << c.mip.segments << '\n'
    << "mip.dive_heuristic = " << b(c.mip.dive_heuristic) << '\n';
  return o.str();
}

}  // namespace ewn
