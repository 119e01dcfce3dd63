#include "cart/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace cart {
namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 6> kCommandNames{"simulate", "equilibria", "region", "sweep", "peaks", "pawn"};

// ---------------------------------------------------------------------------
// Reading

struct SourceText {
  const std::string& source;
  const std::string& text;

  // Best effort: the first line mentioning the quoted leaf key.
  std::string where(const std::string& dotted) const {
    const std::string leaf = dotted.substr(dotted.rfind('.') + 1);
    const auto pos = text.find('"' + leaf + '"');
    if (pos == std::string::npos) return source.empty() ? std::string() : "--set";
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
    return source + ":" + std::to_string(line);
  }
};

class Section {
 public:
  Section(const Json& node, std::string prefix, const SourceText& src)
      : node_(node), prefix_(std::move(prefix)), src_(src) {}

  ConfigError error(const std::string& key, const std::string& what) const {
    return ConfigError(src_.where(key), "'" + key + "': " + what);
  }

  // Calls f(value, dotted key) when `key` is present.
  template <class F>
  void read(const std::string& key, F&& f) {
    seen_.insert(key);
    const auto it = node_.find(key);
    if (it != node_.end()) f(*it, prefix_ + key);
  }

  void number(const std::string& key, double& out) {
    read(key, [&](const Json& v, const std::string& dotted) {
      if (!v.is_number()) throw error(dotted, "expected a number");
      out = v.get<double>();
    });
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    read(key, [&](const Json& v, const std::string& dotted) {
      if (!v.is_number_integer()) throw error(dotted, "expected an integer");
      if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) throw error(dotted, "out of range");
        out = static_cast<Int>(u);
      } else {
        const auto s = v.get<std::int64_t>();
        if (s < static_cast<std::int64_t>(std::numeric_limits<Int>::min())) throw error(dotted, "out of range");
        out = static_cast<Int>(s);
      }
    });
  }

  void flag(const std::string& key, bool& out) {
    read(key, [&](const Json& v, const std::string& dotted) {
      if (!v.is_boolean()) throw error(dotted, "expected true or false");
      out = v.get<bool>();
    });
  }

  void text(const std::string& key, std::string& out) {
    read(key, [&](const Json& v, const std::string& dotted) {
      if (!v.is_string()) throw error(dotted, "expected a string");
      out = v.get<std::string>();
    });
  }

  void object(const std::string& key, const std::function<void(Section&)>& body) {
    read(key, [&](const Json& v, const std::string& dotted) {
      if (!v.is_object()) throw error(dotted, "expected an object");
      Section child(v, dotted + ".", src_);
      body(child);
      child.finish();
    });
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) throw error(prefix_ + key, "unknown key");
    }
  }

 private:
  const Json& node_;
  std::string prefix_;
  const SourceText& src_;
  std::set<std::string> seen_;
};

template <class Parse>
auto parse_enum(Section& s, const std::string& key, const std::string& current, Parse parse) {
  std::string text = current;
  s.text(key, text);
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw s.error(key, e.what());
  }
}

void read_axis(Section& s, const std::string& key, GridAxis& axis) {
  s.object(key, [&](Section& a) {
    a.text("name", axis.name);
    a.number("min", axis.min);
    a.number("max", axis.max);
    a.integer("count", axis.count);
  });
}

void read_grid(Section& s, GridSpec& grid) {
  read_axis(s, "x", grid.x);
  read_axis(s, "y", grid.y);
  s.flag("allow_out_of_range", grid.allow_out_of_range);
}

Json axis_json(const GridAxis& axis) {
  return Json{{"name", axis.name}, {"min", axis.min}, {"max", axis.max}, {"count", axis.count}};
}

Json grid_json(const GridSpec& grid) {
  return Json{{"x", axis_json(grid.x)}, {"y", axis_json(grid.y)}, {"allow_out_of_range", grid.allow_out_of_range}};
}

// ---------------------------------------------------------------------------
// Writing

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
  return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw std::ios_base::failure("failed writing '" + path.string() + "'");
}

class CsvFile {
 public:
  CsvFile(fs::path path, std::initializer_list<std::string_view> header) : path_(std::move(path)), out_(open_output(path_)) {
    bool first = true;
    for (auto h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }

  CsvFile& operator<<(double v) { return field(format_number(v)); }
  CsvFile& operator<<(std::string_view v) { return field(v); }
  CsvFile& operator<<(int v) { return field(std::to_string(v)); }
  CsvFile& operator<<(std::size_t v) { return field(std::to_string(v)); }
  void end_row() {
    out_ << '\n';
    fresh_ = true;
  }
  void close() { close_output(out_, path_); }

 private:
  CsvFile& field(std::string_view v) {
    if (!fresh_) out_ << ',';
    out_ << v;
    fresh_ = false;
    return *this;
  }

  fs::path path_;
  std::ofstream out_;
  bool fresh_ = true;
};

void write_json(const fs::path& path, const Json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
  close_output(out, path);
}

// Plain matrix for contour tools: '#' header lines, one row per y value.
void write_matrix(const fs::path& path, const GridSpec& grid, const std::function<double(int, int)>& cell) {
  auto out = open_output(path);
  out << "# rows: " << grid.y.name << " " << format_number(grid.y.min) << " " << format_number(grid.y.max) << " "
      << grid.y.count << "\n# cols: " << grid.x.name << " " << format_number(grid.x.min) << " "
      << format_number(grid.x.max) << " " << grid.x.count << '\n';
  for (int iy = 0; iy < grid.y.count; ++iy) {
    for (int ix = 0; ix < grid.x.count; ++ix) out << (ix ? " " : "") << format_number(cell(ix, iy));
    out << '\n';
  }
  close_output(out, path);
}

Json focus_json(const ModelParams& p) {
  const EquilibriumPoint P3 = equilibrium(EquilibriumKind::P3, p);
  if (!is_biological(P3)) return nullptr;
  const FocusParams f = focus_params(p);
  Json j{{"is_focus", f.is_focus}, {"L3", P3.coords(kLeukemic)}};
  if (f.is_focus) {
    j["alpha"] = f.alpha_re;
    j["omega"] = f.omega;
    j["strong_eigenvalue"] = f.strong_eig;
    j["period"] = f.period();
    j["deviation_ratio"] = f.deviation_decay_ratio();
  }
  return j;
}

Json stats_json(const StepStats& s) {
  return Json{{"accepted_steps", s.accepted}, {"rejected_steps", s.rejected}, {"min_component", s.min_component}};
}

// ---------------------------------------------------------------------------
// Commands

int run_simulate(const RunConfig& c) {
  const Trajectory tr = integrate(c.scenario.params, c.scenario.init, c.simulate_t_end, c.integration);
  CsvFile traj(c.out / "trajectory.csv", {"t", "C", "L", "B"});
  for (const auto& s : tr.samples) {
    traj << s.t << s.y(kCarT) << s.y(kLeukemic) << s.y(kBCell);
    traj.end_row();
  }
  traj.close();
  CsvFile events(c.out / "events.csv", {"t", "kind"});
  for (const auto& e : tr.events) {
    events << e.t << to_string(e.kind);
    events.end_row();
  }
  events.close();

  const auto& last = tr.back();
  Json summary{{"termination", to_string(tr.terminated)},
               {"t_final", last.t},
               {"final_state", {last.y(kCarT), last.y(kLeukemic), last.y(kBCell)}},
               {"stats", stats_json(tr.stats)}};
  write_json(c.out / "summary.json", summary);
  return tr.terminated == Termination::TimeEnd ? kExitOk : kExitNumerical;
}

int run_equilibria(const RunConfig& c) {
  const ModelParams& p = c.scenario.params;
  CsvFile csv(c.out / "equilibria.csv",
              {"point", "C", "L", "B", "defined", "biological", "stable", "hyperbolic", "dim_stable", "dim_unstable",
               "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im", "lambda3_re", "lambda3_im", "residual"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& point : equilibria(p)) {
    csv << to_string(point.kind);
    if (!point.defined) {
      csv << nan << nan << nan << "false" << "false" << "false" << "false" << 0 << 0;
      for (int i = 0; i < 7; ++i) csv << nan;
      csv.end_row();
      continue;
    }
    const EquilibriumReport r = classify(point, p);
    csv << point.coords(kCarT) << point.coords(kLeukemic) << point.coords(kBCell) << "true"
        << (r.biological ? "true" : "false") << (r.stable ? "true" : "false") << (r.hyperbolic ? "true" : "false")
        << r.dim_stable << r.dim_unstable;
    for (const auto& lambda : r.eigenvalues) csv << lambda.real() << lambda.imag();
    csv << relative_residual(point.coords, p);
    csv.end_row();
  }
  csv.close();

  const RegionResult region = region_classify(p);
  const Thresholds t = thresholds(p);
  Json summary{{"region", to_string(region.label)},
               {"on_boundary", region.on_boundary},
               {"thresholds", {{"blue", t.blue}, {"red", t.red}, {"green", t.green}}},
               {"hopf_l1", hopf_l1(p)},
               {"p3_focus", focus_json(p)}};
  const CubicCoeffs poly = char_poly_p3(p);
  summary["p3_char_poly"] = {1.0, poly.a2, poly.a1, poly.a0};
  write_json(c.out / "summary.json", summary);
  return kExitOk;
}

int run_region(const RunConfig& c) {
  const RegionMap map = region_map(c.region_grid, c.workers);
  const GridSpec& g = map.grid;
  CsvFile csv(c.out / "region.csv", {"I0", "tauC_rhoC", "region", "blue", "red", "green"});
  for (int iy = 0; iy < g.y.count; ++iy) {
    for (int ix = 0; ix < g.x.count; ++ix) {
      const Scenario s = g.at(ix, iy);
      const Thresholds& t = map.thresholds[static_cast<std::size_t>(iy) * g.x.count + ix];
      csv << s.params.I0 << s.params.stimulation_product() << to_string(map.at(ix, iy).label) << t.blue << t.red
          << t.green;
      csv.end_row();
    }
  }
  csv.close();
  write_matrix(c.out / "region_matrix.txt", g,
               [&](int ix, int iy) { return static_cast<double>(static_cast<int>(map.at(ix, iy).label)); });

  // Edges of the band where P3 has only real eigenvalues, per tau_C, over the
  // positive part of the I0 axis.
  CsvFile band(c.out / "focus_band.csv", {"tau_C", "I0", "edge", "tauC_rhoC"});
  const double lo = std::min(g.y.min, g.y.max), hi = std::max(g.y.min, g.y.max);
  const bool product_axis = g.y.name == "tauC_rhoC" && g.x.name == "I0" && lo > 0.0 && hi > lo;
  if (product_axis) {
    for (double tau_C : {14.0, 17.0, 20.0, 25.0, 30.0}) {
      for (int ix = 0; ix < g.x.count; ++ix) {
        ModelParams p = c.scenario.params;
        p.tau_C = tau_C;
        p.I0 = g.x.value(ix);
        if (!(p.I0 > 0.0)) continue;
        const auto edges = focus_band_edges(p, lo, hi);
        for (std::size_t e = 0; e < edges.size(); ++e) {
          band << tau_C << p.I0 << e << edges[e];
          band.end_row();
        }
      }
    }
  }
  band.close();

  std::array<std::size_t, 5> counts{};
  for (const auto& cell : map.cells) ++counts[static_cast<std::size_t>(cell.label)];
  Json summary{{"grid", grid_json(g)}, {"cells", Json::object()}};
  for (int l = 0; l < 5; ++l) summary["cells"][std::string(to_string(static_cast<RegionLabel>(l)))] = counts[l];
  write_json(c.out / "summary.json", summary);
  return kExitOk;
}

int run_sweep(const RunConfig& c) {
  const PeakSurface surface = peak_surface(c.sweep_grid, c.sweep_k, c.sweep_quantity, c.sweep_options(c.sweep_horizon));
  const GridSpec& g = surface.grid;
  CsvFile csv(c.out / "surface.csv", {"x", "y", "value", "mask"});
  for (int iy = 0; iy < g.y.count; ++iy) {
    for (int ix = 0; ix < g.x.count; ++ix) {
      csv << g.x.value(ix) << g.y.value(iy) << surface.values(iy, ix) << (surface.missing(iy, ix) ? 1 : 0);
      csv.end_row();
    }
  }
  csv.close();
  write_matrix(c.out / "surface_matrix.txt", g, [&](int ix, int iy) { return surface.values(iy, ix); });

  Json meta{{"grid", grid_json(g)},
            {"fixed", Json::object()},
            {"k", surface.k},
            {"quantity", to_string(surface.quantity)},
            {"horizon", surface.horizon},
            {"integration", to_json(c)["integration"]},
            {"missing_cells", surface.missing.count()}};
  for (const auto& info : kParameterTable) meta["fixed"][std::string(info.key)] = get_value(g.fixed, info.key);
  write_json(c.out / "surface.json", meta);
  return kExitOk;
}

int run_peaks(const RunConfig& c) {
  const PeakSeries series =
      detect_peaks(c.scenario.params, c.scenario.init, c.peaks_t_end, c.max_peaks, c.integration);
  const auto deltas = series.deltas();
  const auto ratios = series.ratios();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CsvFile csv(c.out / "peaks.csv", {"n", "t_peak", "L_peak", "delta_t", "ratio"});
  for (std::size_t n = 0; n < series.size(); ++n) {
    csv << n + 1 << series.peaks[n].t << series.peaks[n].L << (n < deltas.size() ? deltas[n] : nan)
        << (n < ratios.size() ? ratios[n] : nan);
    csv.end_row();
  }
  csv.close();
  Json summary{{"stop", to_string(series.stop)}, {"count", series.size()}, {"p3_focus", focus_json(c.scenario.params)}};
  write_json(c.out / "summary.json", summary);
  return series.stop == PeakStop::Blowup || series.stop == PeakStop::Tolerance ? kExitNumerical : kExitOk;
}

int run_pawn(const RunConfig& c) {
  const PawnResult r = pawn_indices(c.plan, c.sweep_options(c.pawn_horizon), c.scenario, c.missing_peak);
  CsvFile ks(c.out / "pawn_ks.csv", {"output", "parameter", "conditioning_value", "ks"});
  CsvFile summary(c.out / "pawn_summary.csv", {"output", "parameter", "median_ks", "relative_index", "ks_critical"});
  CsvFile dist(c.out / "pawn_distributions.csv", {"output", "parameter", "conditioning_value", "value"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Json meta{{"missing_peak", to_string(c.missing_peak)}, {"outputs", Json::array()}};
  for (const auto& o : r.outputs) {
    for (double v : o.unconditional) {
      dist << o.name << "unconditional" << nan << v;
      dist.end_row();
    }
    Json oj{{"name", o.name}, {"coverage", o.coverage}, {"aborted", o.aborted}, {"parameters", Json::array()}};
    for (const auto& p : o.parameters) {
      for (std::size_t j = 0; j < p.conditioning_values.size(); ++j) {
        ks << o.name << p.name << p.conditioning_values[j] << p.ks[j];
        ks.end_row();
        for (double v : p.conditional[j]) {
          dist << o.name << p.name << p.conditioning_values[j] << v;
          dist.end_row();
        }
      }
      summary << o.name << p.name << p.median_ks << p.relative_index << p.ks_critical;
      summary.end_row();
      oj["parameters"].push_back({{"name", p.name}, {"coverage", p.coverage}, {"aborted", p.aborted}});
    }
    meta["outputs"].push_back(std::move(oj));
  }
  ks.close();
  summary.close();
  dist.close();
  write_json(c.out / "pawn.json", meta);
  return kExitOk;
}

}  // namespace

std::string_view to_string(Command command) { return kCommandNames[static_cast<std::size_t>(command)]; }

Command parse_command(std::string_view text) {
  for (std::size_t i = 0; i < kCommandNames.size(); ++i) {
    if (kCommandNames[i] == text) return static_cast<Command>(i);
  }
  throw std::invalid_argument("unknown command '" + std::string(text) +
                              "' (simulate, equilibria, region, sweep, peaks, pawn)");
}

GridSpec RunConfig::default_region_grid() {
  GridSpec g;
  g.x = {"I0", -1e9, 6e9, 71};
  g.allow_out_of_range = true;
  return g;
}

SweepOptions RunConfig::sweep_options(double horizon) const { return {integration, horizon, workers}; }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Json parse_config_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigError(source + ":" + std::to_string(line), e.what());
  }
}

Json read_config_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("--set", "expected key=value, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string value(assignment.substr(eq + 1));
  Json parsed;
  try {
    parsed = Json::parse(value);
  } catch (const Json::parse_error&) {
    parsed = value;
  }
  if (!doc.is_object()) throw ConfigError("--set", "configuration root is not an object");
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("--set", "malformed key '" + key + "'");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(parsed);
      return;
    }
    Json& child = (*node)[part];
    if (child.is_null()) child = Json::object();
    if (!child.is_object()) throw ConfigError("--set", "'" + key.substr(0, dot) + "' is not an object");
    node = &child;
    start = dot + 1;
  }
}

RunConfig resolve_config(const Json& doc, const std::string& source, const std::string& text) {
  if (!doc.is_object()) throw ConfigError(source, "configuration root must be an object");
  const SourceText src{source, text};
  Section top(doc, "", src);
  RunConfig c;

  for (const auto& info : kParameterTable) {
    const std::string key(info.key);
    double v = get_value(c.scenario, key);
    top.number(key, v);
    set_value(c.scenario, key, v);
  }
  c.command = parse_enum(top, "command", std::string(to_string(c.command)), parse_command);
  std::string out = c.out.string();
  top.text("out", out);
  c.out = out;
  top.integer("seed", c.seed);
  top.integer("workers", c.workers);
  top.object("integration", [&](Section& s) {
    s.number("rel_tol", c.integration.rel_tol);
    s.number("abs_tol", c.integration.abs_tol);
    s.number("blowup_cap", c.integration.blowup_cap);
    s.number("min_step", c.integration.min_step);
    s.number("sample_interval", c.integration.sample_interval);
    s.number("event_time_tol", c.integration.event_time_tol);
  });
  top.object("simulate", [&](Section& s) { s.number("t_end", c.simulate_t_end); });
  top.object("peaks", [&](Section& s) {
    s.number("t_end", c.peaks_t_end);
    s.integer("max_peaks", c.max_peaks);
  });
  top.object("region", [&](Section& s) { read_grid(s, c.region_grid); });
  top.object("sweep", [&](Section& s) {
    read_grid(s, c.sweep_grid);
    s.integer("k", c.sweep_k);
    c.sweep_quantity = parse_enum(s, "quantity", std::string(to_string(c.sweep_quantity)), parse_peak_quantity);
    s.number("horizon", c.sweep_horizon);
  });
  top.object("pawn", [&](Section& s) {
    s.integer("n_unconditional", c.plan.n_unconditional);
    s.integer("n_conditioning_points", c.plan.n_conditioning_points);
    s.integer("n_conditional", c.plan.n_conditional);
    c.missing_peak = parse_enum(s, "missing_peak", std::string(to_string(c.missing_peak)), parse_missing_peak);
    s.number("horizon", c.pawn_horizon);
    s.read("varied", [&](const Json& v, const std::string& dotted) {
      if (!v.is_array() || v.empty()) throw s.error(dotted, "expected a non-empty array");
      c.plan.varied.clear();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_object()) throw s.error(dotted, "entries must be objects");
        VariedParameter vp;
        Section e(v[i], dotted + "[" + std::to_string(i) + "].", src);
        e.text("name", vp.name);
        e.number("min", vp.min);
        e.number("max", vp.max);
        e.finish();
        c.plan.varied.push_back(std::move(vp));
      }
    });
  });
  top.finish();

  c.plan.seed = c.seed;
  c.region_grid.fixed = c.scenario;
  c.sweep_grid.fixed = c.scenario;

  validate(c.scenario);
  const auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) throw RangeError(std::string(name) + " must be finite and > 0");
  };
  positive(c.integration.rel_tol, "integration.rel_tol");
  positive(c.integration.abs_tol, "integration.abs_tol");
  positive(c.integration.blowup_cap, "integration.blowup_cap");
  positive(c.integration.min_step, "integration.min_step");
  positive(c.integration.event_time_tol, "integration.event_time_tol");
  if (!(c.integration.sample_interval >= 0.0)) throw RangeError("integration.sample_interval must be >= 0");
  positive(c.simulate_t_end, "simulate.t_end");
  positive(c.peaks_t_end, "peaks.t_end");
  positive(c.sweep_horizon, "sweep.horizon");
  positive(c.pawn_horizon, "pawn.horizon");
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return resolve_config(parse_config_text(text, path.string()), path.string(), text);
}

Json to_json(const RunConfig& c) {
  Json j;
  for (const auto& info : kParameterTable) j[std::string(info.key)] = get_value(c.scenario, info.key);
  j["command"] = to_string(c.command);
  j["out"] = c.out.string();
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  const auto& o = c.integration;
  j["integration"] = {{"rel_tol", o.rel_tol},
                      {"abs_tol", o.abs_tol},
                      {"blowup_cap", o.blowup_cap},
                      {"min_step", o.min_step},
                      {"sample_interval", o.sample_interval},
                      {"event_time_tol", o.event_time_tol}};
  j["simulate"] = {{"t_end", c.simulate_t_end}};
  j["peaks"] = {{"t_end", c.peaks_t_end}, {"max_peaks", c.max_peaks}};
  j["region"] = grid_json(c.region_grid);
  j["sweep"] = grid_json(c.sweep_grid);
  j["sweep"]["k"] = c.sweep_k;
  j["sweep"]["quantity"] = to_string(c.sweep_quantity);
  j["sweep"]["horizon"] = c.sweep_horizon;
  Json varied = Json::array();
  for (const auto& v : c.plan.varied) varied.push_back({{"name", v.name}, {"min", v.min}, {"max", v.max}});
  j["pawn"] = {{"n_unconditional", c.plan.n_unconditional},
               {"n_conditioning_points", c.plan.n_conditioning_points},
               {"n_conditional", c.plan.n_conditional},
               {"missing_peak", to_string(c.missing_peak)},
               {"horizon", c.pawn_horizon},
               {"varied", std::move(varied)}};
  return j;
}

int run(const RunConfig& config, std::ostream& err) {
  try {
    fs::create_directories(config.out);
    write_json(config.out / "config.json", to_json(config));
    switch (config.command) {
      case Command::Simulate: return run_simulate(config);
      case Command::Equilibria: return run_equilibria(config);
      case Command::Region: return run_region(config);
      case Command::Sweep: return run_sweep(config);
      case Command::Peaks: return run_peaks(config);
      case Command::Pawn: return run_pawn(config);
    }
    return kExitOk;
  } catch (const RangeError& e) {
    err << "range error: " << e.what() << '\n';
    return kExitRange;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    err << "range error: " << e.what() << '\n';
    return kExitRange;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace cart
