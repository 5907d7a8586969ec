#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gmt/io.hpp"

namespace gmt {

struct CalibratedConstant {
  double value = 0.0;
  std::string provenance;  // the run that produced the value
};

// Named constants per dataset, frozen on first write.
class CalibrationRecord {
 public:
  static CalibrationRecord load(const std::string& path);  // empty record if the file is missing
  static CalibrationRecord from_json(const Json& j);
  Json to_json() const;
  void save(const std::string& path) const;

  bool has(const std::string& dataset, const std::string& name) const;
  const CalibratedConstant& get(const std::string& dataset, const std::string& name) const;
  // ConfigError when the constant is already frozen for the dataset.
  void freeze(const std::string& dataset, const std::string& name, CalibratedConstant c);

 private:
  std::map<std::string, std::map<std::string, CalibratedConstant>> data_;
};

const std::vector<std::string>& calibration_constants();

struct CalibrationOptions {
  int threads = 1;
  std::uint64_t seed = 1;
  double alpha_twoproj = 0.01;
};

// R lower bound on K_m x K_m at eps = 4^-m, r = 1, M = 1 (8 frames,
// resolution 4^m); the quantity behind C_rect_beta.
double rect_decay_value(int m, int threads);

// R lower bound on K_n x K_n, n = ceil(m/2), at eps = 2^-m, r = 1, M = 1
// (8 frames, resolution 16, height step 2^-9 for every m so the path class
// is fixed);
// the quantity behind C_rect_twoproj. Needs m <= 8.
double twoproj_decay_value(int m, int threads);

// Runs the designated smallest instance for `name` on the cantor dataset.
CalibratedConstant run_calibration(const std::string& name, const CalibrationOptions& opt);

}  // namespace gmt
