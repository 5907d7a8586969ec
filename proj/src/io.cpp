#include "gmt/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gmt/error.hpp"

namespace gmt {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// json numbers must be finite
static Json num(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json metadata_json(const Metadata& m) {
  Json j;
  j["version"] = kVersion;
  j["seed"] = m.seed;
  j["alpha"] = m.alpha;
  if (!m.command.empty()) j["command"] = m.command;
  j["domain"] = "[0,1]^2";
  return j;
}

std::string metadata_comment(const Metadata& m) {
  std::string s = std::string("# gmt ") + kVersion + " seed=" + std::to_string(m.seed) +
                  " alpha=" + format_number(m.alpha);
  if (!m.command.empty()) s += " command=" + m.command;
  return s;
}

Json to_json(const IntervalSet& s) {
  Json a = Json::array();
  for (const auto& iv : s.intervals()) a.push_back({iv.lo, iv.hi});
  return a;
}

IntervalSet interval_set_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("interval set JSON must be an array of pairs");
  std::vector<Interval> raw;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw ConfigError("interval set JSON must be an array of pairs");
    raw.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return merge_intervals(std::move(raw));
}

std::string interval_set_csv(const IntervalSet& s) {
  std::string out;
  for (const auto& iv : s.intervals()) out += format_number(iv.lo) + "," + format_number(iv.hi) + "\n";
  return out;
}

Json to_json(const SquareSet& s) {
  Json cells = Json::array();
  for (const auto& c : s.cells()) cells.push_back({c.ix, c.iy});
  Json j;
  j["base"] = s.base();
  j["level"] = s.level();
  j["cells"] = std::move(cells);
  return j;
}

SquareSet square_set_from_json(const Json& j) {
  try {
    int base = j.at("base").get<int>();
    int level = j.at("level").get<int>();
    std::vector<Cell> cells;
    for (const auto& c : j.at("cells")) {
      if (!c.is_array() || c.size() != 2) throw ConfigError("cells must be [ix, iy] pairs");
      cells.push_back({c[0].get<std::int64_t>(), c[1].get<std::int64_t>()});
    }
    return SquareSet(base, level, std::move(cells));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("square set JSON: ") + e.what());
  }
}

Json to_json(const ScaleSchedule& s) {
  Json j;
  j["mode"] = s.mode == ScheduleMode::twoproj ? "twoproj" : "pairs";
  j["N"] = s.N();
  Json levels = Json::array();
  for (const auto& l : s.levels) levels.push_back({{"r_minus", l.r_minus}, {"r_plus", l.r_plus}});
  j["levels"] = std::move(levels);
  Json certs = Json::array();
  for (const auto& c : s.certificates) {
    Json e;
    e["level"] = c.level;
    e["inequality"] = c.inequality;
    e["lhs"] = num(c.lhs);
    e["rhs"] = num(c.rhs);
    e["slack"] = num(c.slack);
    e["ok"] = c.ok;
    if (!c.note.empty()) e["note"] = c.note;
    certs.push_back(std::move(e));
  }
  j["certificates"] = std::move(certs);
  j["all_ok"] = s.all_ok();
  return j;
}

ScaleSchedule schedule_from_json(const Json& j) {
  try {
    ScaleSchedule s;
    s.mode = j.at("mode").get<std::string>() == "twoproj" ? ScheduleMode::twoproj : ScheduleMode::pairs;
    for (const auto& l : j.at("levels")) s.levels.push_back({l.at("r_minus").get<double>(), l.at("r_plus").get<double>()});
    if (j.contains("certificates"))
      for (const auto& c : j.at("certificates"))
        s.certificates.push_back({c.at("level").get<int>(), c.at("inequality").get<std::string>(),
                                  c.at("lhs").get<double>(), c.at("rhs").get<double>(), c.at("slack").get<double>(),
                                  c.at("ok").get<bool>(), c.value("note", std::string())});
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schedule JSON: ") + e.what());
  }
}

Json to_json(const LipschitzPath& p) {
  Json j;
  j["theta"] = p.frame.theta;
  j["origin"] = p.origin;
  j["grid_step"] = p.grid_step;
  j["M"] = p.M;
  j["heights"] = p.heights;
  return j;
}

Json to_json(const RectEstimate& e) {
  Json j;
  j["lower"] = e.lower;
  j["error_bound"] = "exact";
  j["bound_kind"] = "lower bound over the quantized path class";
  j["frames_searched"] = e.frames_searched;
  j["windows_searched"] = e.windows_searched;
  j["window"] = {e.window.lo, e.window.hi};
  j["length_r_windows_only"] = e.length_r_windows_only;
  j["witness"] = to_json(e.witness);
  return j;
}

Json to_json(const JonesSum& s) {
  Json j;
  j["total"] = s.total;
  j["error_bound"] = "exact";
  j["truncation_level"] = s.truncation_level;
  Json lv = Json::array();
  for (const auto& l : s.per_level) lv.push_back({{"level", l.level}, {"partial", l.partial}, {"squares", l.squares}});
  j["per_level"] = std::move(lv);
  return j;
}

Json to_json(const DeficitReport& r) {
  Json j;
  j["n"] = r.n;
  j["offset"] = r.offset;
  j["flat_threshold"] = r.flat_threshold;
  j["desk_threshold"] = r.desk_threshold;
  j["finest_count"] = r.finest_count;
  j["measure_estimate"] = r.measure_estimate;
  j["total_violations"] = r.total_violations();
  Json lv = Json::array();
  for (const auto& l : r.levels) {
    Json e;
    e["level"] = l.level;
    e["occupied"] = l.occupied;
    e["flat"] = l.flat;
    e["fully_occupied"] = l.fully_occupied;
    e["flat_losing"] = l.flat_losing;
    e["violations"] = l.violations;
    e["below_desk"] = l.below_desk;
    e["min_beta_full"] = l.min_beta_full;
    lv.push_back(std::move(e));
  }
  j["levels"] = std::move(lv);
  return j;
}

Json to_json(const FavardEstimate& e, bool per_angle) {
  Json j;
  j["value"] = e.value;
  j["error_bound"] = e.error_bound;
  j["angles"] = e.angle_count;
  if (per_angle) {
    Json a = Json::array();
    for (const auto& s : e.per_angle) a.push_back({s.theta, s.measure});
    j["per_angle"] = std::move(a);
  }
  return j;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != columns_.size()) throw ConfigError("csv row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str(const Metadata& meta) const {
  std::ostringstream os;
  os << metadata_comment(meta) << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << content;
  if (!out) throw ConfigError("write failed for " + path);
}

}  // namespace gmt
