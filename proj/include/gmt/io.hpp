#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmt/beta.hpp"
#include "gmt/geometry.hpp"
#include "gmt/multiscale.hpp"
#include "gmt/projection.hpp"
#include "gmt/rectifiability.hpp"

namespace gmt {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

struct Metadata {
  std::uint64_t seed = 1;
  double alpha = 0.25;
  std::string command;
};

Json metadata_json(const Metadata& m);
// "# gmt <version> seed=<s> alpha=<a> command=<c>"
std::string metadata_comment(const Metadata& m);

Json to_json(const IntervalSet& s);
IntervalSet interval_set_from_json(const Json& j);
// one "lo,hi" row per interval, no header
std::string interval_set_csv(const IntervalSet& s);

Json to_json(const SquareSet& s);
SquareSet square_set_from_json(const Json& j);

Json to_json(const ScaleSchedule& s);
ScaleSchedule schedule_from_json(const Json& j);
Json to_json(const LipschitzPath& p);
Json to_json(const RectEstimate& e);
Json to_json(const JonesSum& s);
Json to_json(const DeficitReport& r);
Json to_json(const FavardEstimate& e, bool per_angle = false);

// Simple table writer: header plus rows, values already formatted.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add(std::vector<std::string> row);
  std::string str(const Metadata& meta) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gmt
