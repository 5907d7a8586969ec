#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <new>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmt/beta.hpp"
#include "gmt/calibration.hpp"
#include "gmt/cantor.hpp"
#include "gmt/diagnostics.hpp"
#include "gmt/error.hpp"
#include "gmt/io.hpp"
#include "gmt/multiscale.hpp"
#include "gmt/needle.hpp"
#include "gmt/projection.hpp"
#include "gmt/rectifiability.hpp"

using namespace gmt;

namespace {

struct Globals {
  int threads = 1;
  std::uint64_t seed = 1;
  double alpha = 0.25;
  std::string json_path;
  std::string csv_path;
};

struct SetSpec {
  std::string kind;  // cantor | boundary | squares | empty
  int n = 4;
  int depth = -1;
  std::string file;
};

SetSpec cantor_spec() {
  SetSpec s;
  s.kind = "cantor";
  return s;
}

void add_set_options(CLI::App* c, SetSpec& s, int default_n) {
  s.n = default_n;
  c->add_option("--set", s.kind, "cantor | boundary | squares | empty")
      ->check(CLI::IsMember({"cantor", "boundary", "squares", "empty"}));
  c->add_option("--n", s.n, "Cantor generation")->capture_default_str();
  c->add_option("--depth", s.depth, "cell level for --set boundary (default n + 1)");
  c->add_option("--squares", s.file, "square set JSON for --set squares");
}

SquareSet build_set(const SetSpec& s) {
  if (s.kind == "cantor") return cantor_squares(s.n);
  if (s.kind == "boundary") return boundary_squares(s.n, s.depth < 0 ? s.n + 1 : s.depth);
  if (s.kind == "squares") {
    if (s.file.empty()) throw ConfigError("--set squares needs --squares <file>");
    Json j;
    try {
      j = Json::parse(read_file(s.file));
    } catch (const Json::exception& e) {
      throw ConfigError("cannot parse " + s.file + ": " + e.what());
    }
    return square_set_from_json(j);
  }
  if (s.kind == "empty") return SquareSet(4, 0, {});
  throw ConfigError("no set given (--set cantor|boundary|squares|empty)");
}

Json set_json(const SetSpec& s) {
  Json j;
  j["kind"] = s.kind;
  if (s.kind == "cantor" || s.kind == "boundary") j["n"] = s.n;
  if (s.kind == "boundary") j["depth"] = s.depth < 0 ? s.n + 1 : s.depth;
  if (s.kind == "squares") j["file"] = s.file;
  return j;
}

DiscreteMeasure measure_for(const SetSpec& s, SquareSet E) {
  if (s.kind == "cantor") return DiscreteMeasure(std::move(E), std::ldexp(1.0, -2 * s.n));
  double m = E.empty() ? 1.0 : 1.0 / static_cast<double>(E.size());
  return DiscreteMeasure(std::move(E), m);
}

NbhdOracle projection_nbhd(const SquareSet& E) {
  auto a = project(E, Direction(0.0));
  auto b = project(E, Direction(std::numbers::pi / 2));
  return [a, b](double r) -> NbhdValues {
    return {a.empty() ? 0.0 : neighborhood(a, r).measure(), b.empty() ? 0.0 : neighborhood(b, r).measure()};
  };
}

class Output {
 public:
  Output(const Globals& g, std::string command) : g_(g) { meta_ = {g.seed, g.alpha, std::move(command)}; }
  const Metadata& meta() const { return meta_; }

  Json doc() const {
    Json j;
    j["meta"] = metadata_json(meta_);
    return j;
  }

  void emit(const Json& j, const std::optional<CsvTable>& csv) const {
    std::string text = j.dump(2) + "\n";
    if (g_.json_path.empty())
      std::cout << text;
    else
      write_file(g_.json_path, text);
    if (!g_.csv_path.empty()) {
      if (!csv) throw ConfigError("this command has no CSV form");
      write_file(g_.csv_path, csv->str(meta_));
    }
  }

 private:
  const Globals& g_;
  Metadata meta_;
};

std::string num(double v) { return format_number(v); }

// ---- cantor ----

struct CantorCmd {
  SetSpec set = cantor_spec();
  std::string emit;
  std::vector<double> content;
};

void run_cantor(const Globals& g, const CantorCmd& c) {
  Output out(g, "cantor");
  SquareSet E = build_set(c.set);
  Json j = out.doc();
  j["set"] = set_json(c.set);
  j["cells"] = E.size();
  j["area"] = E.area();
  CsvTable csv({"lo", "hi", "error_bound"});
  if (c.set.kind == "cantor") {
    auto I = cantor_intervals(c.set.n);
    j["intervals"] = to_json(I);
    j["interval_measure"] = I.measure();
    for (const auto& iv : I.intervals()) csv.add({num(iv.lo), num(iv.hi), "exact"});
  }
  if (!c.content.empty()) {
    if (c.content.size() != 2) throw ConfigError("--content takes r_lo r_hi");
    auto cov = spherical_content_cover(E, c.content[0], c.content[1]);
    j["content"] = {{"value", cov.value},
                    {"radius", cov.radius},
                    {"balls", cov.balls},
                    {"bound_kind", "upper bound on spherical content"}};
  }
  if (!c.emit.empty()) write_file(c.emit, to_json(E).dump() + "\n");
  out.emit(j, csv);
}

// ---- favard ----

struct FavardCmd {
  SetSpec set = cantor_spec();
  double tol = 1e-3;
  bool table = false;
  bool oracle = false;
  bool per_angle = false;
  std::int64_t samples = 100000;
};

void run_favard(const Globals& g, const FavardCmd& c) {
  Output out(g, "favard");
  FavardOptions fo;
  fo.tol = c.tol;
  fo.threads = g.threads;
  Json j = out.doc();
  j["set"] = set_json(c.set);
  CsvTable csv({"n", "value", "error_bound", "angles"});
  Json rows = Json::array();
  if (c.table) {
    if (c.set.kind != "cantor") throw ConfigError("--table needs --set cantor");
    auto t = favard_table(c.set.n, fo);
    for (const auto& r : t.rows) {
      Json e = to_json(r.estimate, c.per_angle);
      e["n"] = r.n;
      rows.push_back(e);
      csv.add({std::to_string(r.n), num(r.estimate.value), num(r.estimate.error_bound),
                std::to_string(r.estimate.angle_count)});
    }
    j["fit"] = {{"slope", t.tail.slope}, {"intercept", t.tail.intercept}, {"r2", t.tail.r2}};
  } else {
    auto E = build_set(c.set);
    auto est = favard(E, fo);
    Json e = to_json(est, c.per_angle);
    e["n"] = c.set.n;
    rows.push_back(e);
    csv.add({std::to_string(c.set.n), num(est.value), num(est.error_bound), std::to_string(est.angle_count)});
  }
  j["rows"] = rows;
  if (c.oracle) {
    auto ne = needle_favard(build_set(c.set), c.samples, g.seed);
    j["oracle"] = {{"method", "Monte Carlo needle"},
                   {"value", ne.value},
                   {"std_error", ne.std_error},
                   {"samples", ne.samples},
                   {"certified", false}};
  }
  out.emit(j, csv);
}

// ---- project ----

struct ProjectCmd {
  SetSpec set = cantor_spec();
  double theta = 0.0;
  double r = 0.0;
};

void run_project(const Globals& g, const ProjectCmd& c) {
  Output out(g, "project");
  auto I = project(build_set(c.set), Direction(c.theta));
  if (c.r > 0.0) I = neighborhood(I, c.r);
  Json j = out.doc();
  j["set"] = set_json(c.set);
  j["theta"] = c.theta;
  if (c.r > 0.0) j["neighborhood"] = c.r;
  j["measure"] = I.measure();
  j["error_bound"] = "exact";
  j["intervals"] = to_json(I);
  CsvTable csv({"lo", "hi", "error_bound"});
  for (const auto& iv : I.intervals()) csv.add({num(iv.lo), num(iv.hi), "exact"});
  out.emit(j, csv);
}

// ---- beta ----

struct BetaCmd {
  SetSpec set = cantor_spec();
  int max_level = 8;
  int deficit = -1;
  double graph = -1.0;
};

std::vector<Segment> v_graph(double M) {
  std::vector<Point> v{{0.0, M / 2}, {0.5, 0.0}, {1.0, M / 2}};
  return polyline(v);
}

void run_beta(const Globals& g, const BetaCmd& c) {
  Output out(g, "beta");
  Json j = out.doc();
  JonesOptions jo;
  jo.max_level = c.max_level;
  jo.threads = g.threads;
  CsvTable csv({"level", "partial", "squares", "error_bound"});
  JonesSum js;
  if (c.graph >= 0.0) {
    if (c.graph == 0.0) throw ConfigError("--graph needs M > 0");
    auto segs = v_graph(c.graph);
    js = jones_sum(segs, jo);
    j["graph"] = {{"M", c.graph}, {"curve", "y = M |x - 1/2| on [0, 1]"}};
  } else {
    js = jones_sum(build_set(c.set), jo);
    j["set"] = set_json(c.set);
  }
  j["jones"] = to_json(js);
  for (const auto& l : js.per_level)
    csv.add({std::to_string(l.level), num(l.partial), std::to_string(l.squares), "exact"});
  if (c.deficit >= 0) {
    if (c.set.kind != "cantor") throw ConfigError("--deficit needs --set cantor");
    DeficitReport r = c.graph >= 0.0 ? square_count_deficit(c.set.n, c.deficit, v_graph(c.graph), g.threads)
                                     : square_count_deficit(c.set.n, c.deficit, cantor_squares(c.set.n), g.threads);
    j["deficit"] = to_json(r);
  }
  out.emit(j, csv);
}

// ---- rect ----

struct RectCmd {
  SetSpec set = cantor_spec();
  double eps = 0.0625;
  double r = 1.0;
  double M = 1.0;
  int frames = 8;
  int resolution = 64;
  double height_step = 0.0;
  double C_prime = 0.0;
};

void run_rect(const Globals& g, const RectCmd& c) {
  Output out(g, "rect");
  RectOptions ro;
  ro.threads = g.threads;
  ro.height_step = c.height_step;
  auto est = rect_lower_sweep(build_set(c.set), {c.eps, c.r, c.M, {}}, c.frames, c.resolution, ro);
  Json j = out.doc();
  j["set"] = set_json(c.set);
  j["query"] = {{"epsilon", c.eps}, {"r", c.r}, {"M", c.M}, {"frames", c.frames}, {"resolution", c.resolution}};
  j["estimate"] = to_json(est);
  CsvTable csv({"quantity", "value", "error_bound"});
  csv.add({"rect_lower", num(est.lower), "exact"});
  if (c.C_prime > 0.0 && c.set.kind == "cantor" && c.set.n >= 1) {
    double ub = rect_upper_beta(c.set.n, 0, c.M, c.C_prime);
    j["upper_beta"] = {{"value", ub}, {"C_prime", c.C_prime}, {"m", c.set.n}, {"l", 0}};
    csv.add({"rect_upper_beta", num(ub), "exact"});
  }
  out.emit(j, csv);
}

// ---- scales ----

struct ScalesCmd {
  SetSpec set;
  std::string mode = "twoproj";
  double rmin = 1e-9;
  int N = 0;
  double L = 0.0;
  int frames = 8;
  int resolution = 64;
};

void run_scales(const Globals& g, const ScalesCmd& c) {
  Output out(g, "scales");
  if (c.set.kind.empty())
    throw ConfigError("scales: no set given, so the blocking inequality m(N_{r_2}(E_omega)) <= r_1 cannot be evaluated");
  SquareSet E = build_set(c.set);
  Json j = out.doc();
  j["set"] = set_json(c.set);
  j["alpha"] = g.alpha;
  CsvTable csv({"level", "r_minus", "r_plus", "error_bound"});
  ScaleSchedule s;
  if (c.mode == "twoproj") {
    auto nb = projection_nbhd(E);
    s = build_schedule_twoproj(nb, c.rmin, c.N);
    j["schedule"] = to_json(s);
    auto bad = verify_schedule(s, &nb);
    j["recheck"] = {{"ok", bad.empty()}, {"failures", bad}};
  } else {
    MainOptions mo;
    mo.alpha = g.alpha;
    mo.N_target = c.N > 0 ? c.N : 2;
    mo.L = c.L > 0.0 ? c.L : 32.0;
    RectOptions ro;
    ro.threads = g.threads;
    ContentOracle content = [&](double a, double b) { return spherical_content_upper(E, a, b); };
    RectOracle rect = [&](double eps, double r, double M) {
      return rect_lower_sweep(E, {eps, r, M, {}}, c.frames, c.resolution, ro).lower;
    };
    auto ms = build_schedule_main(content, rect, mo);
    s = ms.schedule;
    j["schedule"] = to_json(s);
    j["exponents"] = ms.exponents;
    j["report"] = {{"L", ms.report.L},
                   {"N", ms.report.N},
                   {"alpha", ms.report.alpha},
                   {"C", ms.report.C},
                   {"predicted_favard_bound", ms.report.predicted}};
    auto bad = verify_schedule(s);
    j["recheck"] = {{"ok", bad.empty()}, {"failures", bad}};
  }
  for (std::size_t i = 0; i < s.levels.size(); ++i)
    csv.add({std::to_string(i + 1), num(s.levels[i].r_minus), num(s.levels[i].r_plus), "exact"});
  out.emit(j, csv);
}

// ---- diag ----

struct DiagCmd {
  SetSpec set = cantor_spec();
  double x = 0.5, y = 0.5;
  double theta = 0.0;
  double r_inner = 0.0, r_outer = 0.25;
  double M = 2.0;
  int level = 2;
  std::string schedule;
  double c = 0.0;
  double sep = 0.01;
  double lo = 0.0, hi = 1.0, width = 0.0;
};

void run_diag(const Globals& g, const std::string& which, const DiagCmd& d) {
  Output out(g, "diag " + which);
  SquareSet E = build_set(d.set);
  Json j = out.doc();
  j["set"] = set_json(d.set);
  CsvTable csv({"quantity", "value", "error_bound"});
  Json q;
  if (which == "sector") {
    auto mu = measure_for(d.set, E);
    double m = sector_mass(mu, {{d.x, d.y}, Direction(d.theta), d.r_inner, d.r_outer, d.M});
    q = {{"x", {d.x, d.y}}, {"theta", d.theta}, {"r_inner", d.r_inner}, {"r_outer", d.r_outer}, {"M", d.M},
         {"mass", m}, {"error_bound", "exact"}, {"membership", "cell centre"}};
    csv.add({"sector_mass", num(m), "exact"});
  } else if (which == "normal") {
    ScaleSchedule s;
    if (!d.schedule.empty()) {
      Json sj = Json::parse(read_file(d.schedule));
      s = schedule_from_json(sj.contains("schedule") ? sj["schedule"] : sj);
    } else {
      s = build_schedule_twoproj(projection_nbhd(E), 1e-9);
    }
    auto mu = measure_for(d.set, E);
    NormalOptions no;
    auto r = is_normal(mu, {d.x, d.y}, Direction(d.theta), s, d.level, d.M, g.alpha, no);
    q = {{"x", {d.x, d.y}},
         {"theta", d.theta},
         {"level", d.level},
         {"M", d.M},
         {"normal", r.normal},
         {"witness_r", r.witness_r},
         {"witness_mass", r.witness_mass},
         {"threshold", r.threshold},
         {"radii_tested", r.radii_tested},
         {"offset", no.offset},
         {"factor", no.factor},
         {"guarantee", "may underreport normality (geometric radius grid)"}};
    csv.add({"normal", r.normal ? "1" : "0", "exact"});
  } else if (which == "mult") {
    auto k = line_multiplicity(E, {d.c, Direction(d.theta)}, d.sep);
    q = {{"c", d.c}, {"theta", d.theta}, {"sep", d.sep}, {"multiplicity", k}, {"error_bound", "exact"}};
    csv.add({"line_multiplicity", std::to_string(k), "exact"});
  } else {
    auto mu = measure_for(d.set, E);
    double m = strip_mass(mu, Direction(d.theta), {d.lo, d.hi});
    q = {{"theta", d.theta}, {"window", {d.lo, d.hi}}, {"mass", m}, {"error_bound", "exact"}};
    csv.add({"strip_mass", num(m), "exact"});
    if (d.width > 0.0) {
      double dens = max_strip_density(mu, Direction(d.theta), d.width);
      q["max_density"] = dens;
      q["width"] = d.width;
      csv.add({"max_strip_density", num(dens), "exact"});
    }
  }
  j["query"] = q;
  out.emit(j, csv);
}

// ---- calibrate ----

struct CalibrateCmd {
  std::string constant = "all";
  std::string file = "calibration.json";
  std::string dataset = "cantor";
};

void run_calibrate(const Globals& g, const CalibrateCmd& c) {
  Output out(g, "calibrate");
  auto rec = CalibrationRecord::load(c.file);
  std::vector<std::string> names;
  if (c.constant == "all")
    names = calibration_constants();
  else
    names = {c.constant};
  for (const auto& n : names)
    if (rec.has(c.dataset, n)) throw ConfigError(n + " is already frozen for dataset " + c.dataset);
  CalibrationOptions co;
  co.threads = g.threads;
  co.seed = g.seed;
  Json j = out.doc();
  j["dataset"] = c.dataset;
  Json frozen = Json::object();
  CsvTable csv({"name", "value", "provenance"});
  for (const auto& n : names) {
    auto v = run_calibration(n, co);
    rec.freeze(c.dataset, n, v);
    frozen[n] = {{"value", v.value}, {"provenance", v.provenance}};
    csv.add({n, num(v.value), v.provenance});
  }
  rec.save(c.file);
  j["frozen"] = frozen;
  out.emit(j, csv);
}

// ---- pipeline ----

struct PipelineCmd {
  int n = 6;
  bool full = false;
  std::string out_dir = ".";
  std::string calibration;
};

CalibratedConstant constant_for(const std::string& file, const std::string& name, const CalibrationOptions& co) {
  if (!file.empty()) {
    auto rec = CalibrationRecord::load(file);
    if (rec.has("cantor", name)) return rec.get("cantor", name);
  }
  return run_calibration(name, co);
}

void run_pipeline(const Globals& g, const PipelineCmd& p) {
  if (p.n < 1 || p.n > 8) throw ConfigError("pipeline: --n must lie in 1..8");
  Output out(g, p.full ? "pipeline --full" : "pipeline");
  namespace fs = std::filesystem;
  fs::create_directories(p.out_dir);
  auto path = [&](const char* f) { return (fs::path(p.out_dir) / f).string(); };
  const Metadata& meta = out.meta();

  CalibrationOptions co;
  co.threads = g.threads;
  co.seed = g.seed;
  auto c_favar = constant_for(p.calibration, "C_favar", co);
  auto c_beta = constant_for(p.calibration, "C_rect_beta", co);

  // cantor
  {
    Json j = out.doc();
    auto I = cantor_intervals(p.n);
    j["n"] = p.n;
    j["interval_measure"] = I.measure();
    j["squares"] = to_json(cantor_squares(p.n));
    write_file(path("cantor.json"), j.dump(2) + "\n");
  }

  CsvTable summary({"quantity", "n", "value", "error_bound"});

  FavardOptions fo;
  fo.threads = g.threads;
  auto table = favard_table(p.n, fo);
  {
    CsvTable csv({"n", "value", "error_bound", "angles"});
    for (const auto& r : table.rows) {
      csv.add({std::to_string(r.n), num(r.estimate.value), num(r.estimate.error_bound),
               std::to_string(r.estimate.angle_count)});
      summary.add({"favard", std::to_string(r.n), num(r.estimate.value), num(r.estimate.error_bound)});
    }
    write_file(path("favard.csv"), csv.str(meta));
  }
  for (int n = 2; n <= p.n; ++n)
    summary.add({"favar_bound", std::to_string(n), num(favar_bound(n, g.alpha, c_favar.value)), "exact"});

  const int rect_max = std::min(p.n, p.full ? 6 : 4);
  {
    Json j = out.doc();
    Json rows = Json::array();
    for (int m = 2; m <= rect_max; ++m) {
      double v = rect_decay_value(m, g.threads);
      double ub = rect_upper_beta(m, 0, 1.0, c_beta.value);
      rows.push_back({{"m", m}, {"epsilon", std::ldexp(1.0, -2 * m)}, {"lower", v}, {"upper_beta", ub}});
      summary.add({"rect_lower", std::to_string(m), num(v), "exact"});
      summary.add({"rect_upper_beta", std::to_string(m), num(ub), "exact"});
    }
    j["rect"] = rows;
    j["C_rect_beta"] = {{"value", c_beta.value}, {"provenance", c_beta.provenance}};
    write_file(path("rect.json"), j.dump(2) + "\n");
  }

  {
    auto nb = projection_nbhd(cantor_squares(p.n));
    Json j = out.doc();
    try {
      auto s = build_schedule_twoproj(nb, std::ldexp(1.0, -30));
      j["schedule"] = to_json(s);
      j["recheck_ok"] = verify_schedule(s, &nb).empty();
      summary.add({"twoproj_N", std::to_string(p.n), std::to_string(s.N()), "exact"});
    } catch (const HypothesisError& e) {
      j["schedule_failure"] = e.what();
    }
    write_file(path("schedule.json"), j.dump(2) + "\n");
  }

  if (p.full) {
    JonesOptions jo;
    jo.threads = g.threads;
    const int nj = std::min(p.n, 5);
    jo.max_level = 2 * nj;
    auto js = jones_sum(cantor_squares(nj), jo);
    CsvTable csv({"level", "partial", "squares", "error_bound"});
    for (const auto& l : js.per_level)
      csv.add({std::to_string(l.level), num(l.partial), std::to_string(l.squares), "exact"});
    write_file(path("jones.csv"), csv.str(meta));
    summary.add({"jones_total", std::to_string(nj), num(js.total), "exact"});

    const int nd = std::min(p.n, 6);
    auto rep = square_count_deficit(nd, 2, cantor_squares(nd), g.threads);
    Json j = out.doc();
    j["deficit"] = to_json(rep);
    write_file(path("deficit.json"), j.dump(2) + "\n");
    summary.add({"deficit_violations", std::to_string(nd), std::to_string(rep.total_violations()), "exact"});
  }

  std::string text = summary.str(meta);
  // provenance of every calibrated constant the summary uses
  std::string prov = "# C_favar=" + num(c_favar.value) + " provenance=" + c_favar.provenance + "\n" +
                     "# C_rect_beta=" + num(c_beta.value) + " provenance=" + c_beta.provenance + "\n";
  auto first = text.find('\n') + 1;
  text.insert(first, prov);
  write_file(path("summary.csv"), text);

  Json j = out.doc();
  j["out_dir"] = p.out_dir;
  j["files"] = Json::array({"cantor.json", "favard.csv", "rect.json", "schedule.json", "summary.csv"});
  if (p.full) {
    j["files"].push_back("jones.csv");
    j["files"].push_back("deficit.json");
  }
  out.emit(j, std::nullopt);
}

int fail(const std::string& kind, const std::string& message, int code) {
  Json j;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  std::cout << j.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale geometric measure theory on Cantor product sets"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option values");

  Globals g;
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  app.add_option("--seed", g.seed, "seed for Monte Carlo oracles")->capture_default_str();
  app.add_option("--alpha", g.alpha, "schedule exponent in (0, 1]")->capture_default_str();
  app.add_option("--json", g.json_path, "write JSON here instead of stdout");
  app.add_option("--csv", g.csv_path, "write the CSV table here");

  CantorCmd cantor;
  auto* c_cantor = app.add_subcommand("cantor", "Cantor approximants and content covers");
  add_set_options(c_cantor, cantor.set, 4);
  c_cantor->add_option("--emit", cantor.emit, "write the square set JSON");
  c_cantor->add_option("--content", cantor.content, "r_lo r_hi for a content cover")->expected(2);

  FavardCmd fav;
  auto* c_fav = app.add_subcommand("favard", "Favard length with certified quadrature");
  add_set_options(c_fav, fav.set, 4);
  c_fav->add_option("--tol", fav.tol)->capture_default_str();
  c_fav->add_flag("--table", fav.table, "rows n = 0..n and the decay fit");
  c_fav->add_flag("--per-angle", fav.per_angle);
  c_fav->add_flag("--oracle", fav.oracle, "add an uncertified Monte Carlo needle estimate");
  c_fav->add_option("--samples", fav.samples)->capture_default_str();

  ProjectCmd proj;
  auto* c_proj = app.add_subcommand("project", "Projection of a set onto a direction");
  add_set_options(c_proj, proj.set, 4);
  c_proj->add_option("--theta", proj.theta, "angle in radians")->capture_default_str();
  c_proj->add_option("--r", proj.r, "report the r-neighbourhood instead");

  BetaCmd beta;
  auto* c_beta = app.add_subcommand("beta", "Jones square sums and the square-count deficit");
  add_set_options(c_beta, beta.set, 4);
  c_beta->add_option("--max-level", beta.max_level)->capture_default_str();
  c_beta->add_option("--deficit", beta.deficit, "offset for the square-count deficit report");
  c_beta->add_option("--graph", beta.graph, "use the graph of M|x - 1/2| with this M");

  RectCmd rect;
  auto* c_rect = app.add_subcommand("rect", "Certified lower bound on the rectifiability constant");
  add_set_options(c_rect, rect.set, 4);
  c_rect->add_option("--eps", rect.eps)->capture_default_str();
  c_rect->add_option("--r", rect.r)->capture_default_str();
  c_rect->add_option("--M", rect.M)->capture_default_str();
  c_rect->add_option("--frames", rect.frames)->capture_default_str();
  c_rect->add_option("--resolution", rect.resolution)->capture_default_str();
  c_rect->add_option("--height-step", rect.height_step, "0 picks the default");
  c_rect->add_option("--C-prime", rect.C_prime, "also report C'(1 + M)/n");

  ScalesCmd scales;
  auto* c_scales = app.add_subcommand("scales", "Scale schedules with certificates");
  add_set_options(c_scales, scales.set, 4);
  c_scales->add_option("--mode", scales.mode)->check(CLI::IsMember({"twoproj", "main"}))->capture_default_str();
  c_scales->add_option("--rmin", scales.rmin)->capture_default_str();
  c_scales->add_option("--N", scales.N, "target schedule length");
  c_scales->add_option("--L", scales.L, "length bound for --mode main (default 32)");
  c_scales->add_option("--frames", scales.frames)->capture_default_str();
  c_scales->add_option("--resolution", scales.resolution)->capture_default_str();

  DiagCmd diag;
  auto* c_diag = app.add_subcommand("diag", "Pointwise diagnostics");
  c_diag->require_subcommand(1);
  std::string diag_which;
  for (const char* name : {"sector", "normal", "mult", "strip"}) {
    auto* s = c_diag->add_subcommand(name);
    add_set_options(s, diag.set, 4);
    s->add_option("--theta", diag.theta);
    if (std::string(name) == "sector" || std::string(name) == "normal") {
      s->add_option("--x", diag.x);
      s->add_option("--y", diag.y);
      s->add_option("--M", diag.M);
    }
    if (std::string(name) == "sector") {
      s->add_option("--r-inner", diag.r_inner);
      s->add_option("--r-outer", diag.r_outer);
    }
    if (std::string(name) == "normal") {
      s->add_option("--level", diag.level);
      s->add_option("--schedule", diag.schedule, "schedule JSON (default: twoproj schedule of the set)");
    }
    if (std::string(name) == "mult") {
      s->add_option("--c", diag.c, "line offset along omega");
      s->add_option("--sep", diag.sep);
    }
    if (std::string(name) == "strip") {
      s->add_option("--lo", diag.lo);
      s->add_option("--hi", diag.hi);
      s->add_option("--width", diag.width, "also report the max strip density at this width");
    }
    s->callback([&diag_which, name] { diag_which = name; });
  }

  PipelineCmd pipe;
  auto* c_pipe = app.add_subcommand("pipeline", "Run every module on K_n and write a summary");
  c_pipe->add_option("--n", pipe.n)->capture_default_str();
  c_pipe->add_flag("--full", pipe.full, "also Jones sums, deficit report and rect up to m = 6");
  c_pipe->add_option("--out-dir", pipe.out_dir)->capture_default_str();
  c_pipe->add_option("--calibration", pipe.calibration, "read frozen constants from this record");

  CalibrateCmd cal;
  auto* c_cal = app.add_subcommand("calibrate", "Run and freeze calibration constants");
  c_cal->add_option("--constant", cal.constant, "a constant name or all")->capture_default_str();
  c_cal->add_option("--calibration", cal.file)->capture_default_str();
  c_cal->add_option("--dataset", cal.dataset)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail("config", e.what(), 2);
  }

  try {
    if (!(g.alpha > 0.0 && g.alpha <= 1.0)) throw ConfigError("--alpha must lie in (0, 1]");
    std::fprintf(stderr, "gmt %s threads=%d\n", kVersion, g.threads);
    if (*c_cantor) run_cantor(g, cantor);
    else if (*c_fav) run_favard(g, fav);
    else if (*c_proj) run_project(g, proj);
    else if (*c_beta) run_beta(g, beta);
    else if (*c_rect) run_rect(g, rect);
    else if (*c_scales) run_scales(g, scales);
    else if (*c_diag) run_diag(g, diag_which, diag);
    else if (*c_pipe) run_pipeline(g, pipe);
    else if (*c_cal) run_calibrate(g, cal);
  } catch (const gmt::Error& e) {
    return fail(kind_name(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::bad_alloc&) {
    return fail("budget", "out of memory", 3);
  } catch (const Json::exception& e) {
    return fail("config", e.what(), 2);
  }
  return 0;
}
