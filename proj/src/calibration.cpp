#include "gmt/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "gmt/cantor.hpp"
#include "gmt/error.hpp"
#include "gmt/multiscale.hpp"
#include "gmt/projection.hpp"
#include "gmt/rectifiability.hpp"

namespace gmt {

CalibrationRecord CalibrationRecord::load(const std::string& path) {
  if (!std::filesystem::exists(path)) return {};
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("calibration record " + path + ": " + e.what());
  }
  return from_json(j);
}

CalibrationRecord CalibrationRecord::from_json(const Json& j) {
  CalibrationRecord r;
  try {
    for (const auto& [ds, consts] : j.at("datasets").items())
      for (const auto& [name, c] : consts.items())
        r.data_[ds][name] = {c.at("value").get<double>(), c.at("provenance").get<std::string>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("calibration record: ") + e.what());
  }
  return r;
}

Json CalibrationRecord::to_json() const {
  Json ds = Json::object();
  for (const auto& [name, consts] : data_) {
    Json c = Json::object();
    for (const auto& [k, v] : consts) c[k] = {{"value", v.value}, {"provenance", v.provenance}};
    ds[name] = std::move(c);
  }
  Json j;
  j["version"] = kVersion;
  j["datasets"] = std::move(ds);
  return j;
}

void CalibrationRecord::save(const std::string& path) const { write_file(path, to_json().dump(2) + "\n"); }

bool CalibrationRecord::has(const std::string& dataset, const std::string& name) const {
  auto it = data_.find(dataset);
  return it != data_.end() && it->second.count(name) != 0;
}

const CalibratedConstant& CalibrationRecord::get(const std::string& dataset, const std::string& name) const {
  if (!has(dataset, name)) throw ConfigError("constant " + name + " not calibrated for dataset " + dataset);
  return data_.at(dataset).at(name);
}

void CalibrationRecord::freeze(const std::string& dataset, const std::string& name, CalibratedConstant c) {
  if (has(dataset, name))
    throw ConfigError("constant " + name + " is already frozen for dataset " + dataset + " (value " +
                      format_number(get(dataset, name).value) + ")");
  data_[dataset][name] = std::move(c);
}

const std::vector<std::string>& calibration_constants() {
  static const std::vector<std::string> names{"C_favard_lower", "C_rect_twoproj", "C_rect_beta", "C_pigeonhole",
                                              "C_favar"};
  return names;
}

double rect_decay_value(int m, int threads) {
  SquareSet E = cantor_squares(m);
  RectOptions opt;
  opt.threads = threads;
  const double eps = std::ldexp(1.0, -2 * m);
  const int resolution = 1 << (2 * m);
  return rect_lower_sweep(E, {eps, 1.0, 1.0, {}}, 8, resolution, opt).lower;
}

double twoproj_decay_value(int m, int threads) {
  if (m < 1 || m > 8) throw ConfigError("twoproj decay: need 1 <= m <= 8");
  RectOptions opt;
  opt.threads = threads;
  opt.height_step = std::ldexp(1.0, -9);
  return rect_lower_sweep(cantor_squares((m + 1) / 2), {std::ldexp(1.0, -m), 1.0, 1.0, {}}, 8, 16, opt).lower;
}

CalibratedConstant run_calibration(const std::string& name, const CalibrationOptions& opt) {
  FavardOptions fo;
  fo.tol = 1e-3;
  fo.threads = opt.threads;
  if (name == "C_favard_lower") {
    double best = INFINITY;
    for (int n = 1; n <= 4; ++n) best = std::min(best, n * favard(cantor_squares(n), fo).value);
    return {best, "min over n = 1..4 of n * Fav(K_n x K_n), favard tol 1e-3"};
  }
  if (name == "C_favar") {
    double v = favard(cantor_squares(1), fo).value;
    return {v, "Fav(K_1 x K_1) at tol 1e-3 (log_* guard level, bound = C)"};
  }
  if (name == "C_rect_beta") {
    double R = rect_decay_value(2, opt.threads);
    return {R * 2.0 / (1.0 + 1.0),
            "R lower bound on K_2 x K_2, eps = 4^-2, r = 1, M = 1, 8 frames, resolution 16; C' = R m / (1 + M), m = 2"};
  }
  if (name == "C_rect_twoproj") {
    // R_{K_1 x K_1}(2^-2, 2^0, 1): m = 2, l = 0
    double R = twoproj_decay_value(2, opt.threads);
    double env = twoproj_envelope(3.0, 1.0, opt.alpha_twoproj);
    return {R / env, "R lower bound on K_1 x K_1, eps = 2^-2, r = 1, M = 1, 8 frames, resolution 16, height step "
                     "2^-9, divided by log^-alpha(3), alpha = " + format_number(opt.alpha_twoproj)};
  }
  if (name == "C_pigeonhole") {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> Nd(2, 512);
    std::uniform_real_distribution<double> inc(0.0, 1.0);
    double worst = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
      const int N = Nd(rng);
      std::vector<double> m(static_cast<std::size_t>(N + 1));
      m[0] = inc(rng);
      for (int i = 1; i <= N; ++i) m[static_cast<std::size_t>(i)] = m[static_cast<std::size_t>(i - 1)] + inc(rng);
      std::uniform_real_distribution<double> ed(1.0 / N, 0.5);
      const double eps = ed(rng);
      auto r = pigeonhole(m, eps);
      worst = std::max(worst, r.gap_mass / (eps * m.back()));
    }
    return {worst, "max of gap_mass / (eps masses[N]) over 10^4 random increasing sequences, N in [2, 512], seed " +
                       std::to_string(opt.seed)};
  }
  throw ConfigError("unknown constant " + name);
}

}  // namespace gmt
