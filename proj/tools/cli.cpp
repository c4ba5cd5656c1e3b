#include "cli.hpp"

#include "ceq/coarse_grain.hpp"
#include "ceq/cqe.hpp"
#include "ceq/dataset.hpp"
#include "ceq/io.hpp"
#include "ceq/solvers.hpp"
#include "ceq/thresholds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ceq::cli {

namespace {

using nlohmann::ordered_json;

struct Common
{
  int precision{6};
  std::string format; // text | json | csv, empty for the command default
  unsigned threads{0};
  bool threads_set{false};
};

/// Reported value, rounded to the requested decimals so JSON and text agree.
double rounded(double v, int precision)
{
  double const scale = std::pow(10.0, precision);
  double const r = std::round(v * scale) / scale;
  return r == 0.0 ? 0.0 : r;
}

std::string fixed(double v, int precision)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, rounded(v, precision));
  return buf;
}

DegVector parse_deg(std::string const &text)
{
  DegVector dv;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> dv.fd >> comma >> dv.cd_sum) || comma != ',' || !(in >> std::ws).eof()) {
    throw std::invalid_argument("deg_vector '" + text + "' must look like FD,SUMCD");
  }
  return dv;
}

unsigned resolve_threads(Common const &c)
{
  if (c.threads_set) { return c.threads; }
  if (char const *env = std::getenv("CE_QUANT_THREADS")) {
    try {
      long const v = std::stol(env);
      if (v < 0) { throw std::invalid_argument(env); }
      return static_cast<unsigned>(v);
    } catch (std::exception const &) {
      throw std::invalid_argument(std::string("CE_QUANT_THREADS = '") + env + "' is not a nonnegative integer");
    }
  }
  return 1;
}

void check_n(int n)
{
  if (n < 1 || n > 11) { throw std::invalid_argument("n = " + std::to_string(n) + " outside [1, 11]"); }
}

std::string format_or(Common const &c, std::string const &fallback, std::vector<std::string> const &allowed)
{
  std::string const f = c.format.empty() ? fallback : c.format;
  if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
    std::string list;
    for (auto const &a : allowed) { list += (list.empty() ? "" : ", ") + a; }
    throw std::invalid_argument("--format " + f + " is not available here (use " + list + ")");
  }
  return f;
}

/// Key/value report printed as aligned text, one JSON object, or a two-line CSV.
class Report
{
public:
  explicit Report(int precision)
    : precision_(precision)
  {
  }

  Report &num(std::string const &key, double v)
  {
    items_.push_back({key, fixed(v, precision_)});
    json_[key] = rounded(v, precision_);
    return *this;
  }
  Report &integer(std::string const &key, long long v)
  {
    items_.push_back({key, std::to_string(v)});
    json_[key] = v;
    return *this;
  }
  Report &text(std::string const &key, std::string const &v)
  {
    items_.push_back({key, v});
    json_[key] = v;
    return *this;
  }
  Report &flag(std::string const &key, bool v)
  {
    items_.push_back({key, v ? "true" : "false"});
    json_[key] = v;
    return *this;
  }
  Report &raw(std::string const &key, ordered_json v, std::string const &shown)
  {
    items_.push_back({key, shown});
    json_[key] = std::move(v);
    return *this;
  }

  void print(std::ostream &os, std::string const &format) const
  {
    if (format == "json") {
      os << json_.dump() << '\n';
    } else if (format == "csv") {
      for (std::size_t i = 0; i < items_.size(); ++i) { os << (i ? "," : "") << items_[i].first; }
      os << '\n';
      for (std::size_t i = 0; i < items_.size(); ++i) {
        auto const &v = items_[i].second;
        os << (i ? "," : "") << (v.find(',') != std::string::npos ? "\"" + v + "\"" : v);
      }
      os << '\n';
    } else {
      std::size_t width = 0;
      for (auto const &[k, v] : items_) { width = std::max(width, k.size()); }
      for (auto const &[k, v] : items_) { os << k << std::string(width - k.size() + 2, ' ') << v << '\n'; }
    }
  }

private:
  int precision_;
  std::vector<std::pair<std::string, std::string>> items_;
  ordered_json json_ = ordered_json::object();
};

void write_table(std::ostream &os, Table const &t, int precision, std::string const &format)
{
  if (format == "json") {
    ordered_json rows = ordered_json::array();
    for (auto const &r : t.rows) {
      ordered_json o;
      for (std::size_t i = 0; i < t.columns.size(); ++i) { o[t.columns[i]] = rounded(r[i], precision); }
      rows.push_back(std::move(o));
    }
    os << rows.dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) { os << (i ? "," : "") << t.columns[i]; }
  os << '\n';
  for (auto const &r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) { os << (i ? "," : "") << fixed(r[i], precision); }
    os << '\n';
  }
}

std::ofstream open_out(std::string const &path)
{
  std::ofstream f(path, std::ios::binary);
  if (!f) { throw std::runtime_error("cannot write '" + path + "'"); }
  return f;
}

/// Writes to `path`, or to `out` when path is empty or "-".
template <typename Fn> void emit(std::string const &path, std::ostream &out, Fn &&fn)
{
  if (path.empty() || path == "-") {
    fn(out);
  } else {
    auto f = open_out(path);
    fn(f);
  }
}

std::string cd_text(CdArray const &cd) { return to_string(cd); }

void add_metrics(Report &r, CausalMetrics<double> const &m)
{
  r.num("determinism", m.determinism).num("degeneracy", m.degeneracy).num("effectiveness", m.eff).num("ei", m.ei);
}

ordered_json map_json(CoarseMapping const &cm)
{
  return ordered_json(cm.map);
}

std::string map_text(CoarseMapping const &cm)
{
  std::string s = "[";
  for (std::size_t i = 0; i < cm.map.size(); ++i) { s += (i ? "," : "") + std::to_string(cm.map[i]); }
  return s + "]";
}

} // namespace

int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Causal emergence quantification: EI metrics, synthetic TPMs, CE thresholds"};
  app.name("ce-quant");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--precision", common.precision, "Decimals in printed numbers")->check(CLI::Range(0, 17));
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option_function<unsigned>(
       "--threads",
       [&](unsigned const &v) {
         common.threads = v;
         common.threads_set = true;
       },
       "Worker threads (0 = all cores); CE_QUANT_THREADS sets the default");

  int status = kExitOk;
  std::function<void()> action;

  // gen-tpm
  auto *gen = app.add_subcommand("gen-tpm", "Generate synthetic TPMs for (n, x, deg_vector)");
  struct
  {
    int n{2};
    double x{1.0};
    std::string deg{"1,1"};
    bool all{false};
    std::string out;
    std::string prefix{"tpm"};
  } g;
  gen->add_option("--n", g.n, "Variable count")->required();
  gen->add_option("--x", g.x, "Uncertainty parameter in [0.5, 1]")->required();
  gen->add_option("--deg", g.deg, "deg_vector as FD,SUMCD")->capture_default_str();
  gen->add_flag("--all", g.all, "One file per CD partition");
  gen->add_option("--out", g.out, "Output file, or directory with --all");
  gen->add_option("--prefix", g.prefix, "File name prefix with --all")->capture_default_str();
  gen->callback([&] {
    action = [&] {
      check_n(g.n);
      auto const fmt = format_or(common, "json", {"json", "csv"});
      auto const dv = parse_deg(g.deg);
      auto const tpms = generate<double>(g.n, g.x, dv);
      auto const cds = expand_cd(g.n, dv);
      auto render = [&](TpmD const &t) { return fmt == "json" ? tpm_to_json(t) : tpm_to_csv(t); };
      if (!g.all) {
        emit(g.out, out, [&](std::ostream &os) { os << render(tpms.front()); });
        return;
      }
      std::filesystem::path const dir = g.out.empty() ? std::filesystem::path(".") : std::filesystem::path(g.out);
      std::filesystem::create_directories(dir);
      for (std::size_t i = 0; i < tpms.size(); ++i) {
        std::string name = g.prefix + "_n" + std::to_string(g.n) + "_x" + fixed(g.x, 4) + "_cd";
        for (std::size_t k = 0; k < cds[i].parts.size(); ++k) {
          name += (k ? "-" : "") + std::to_string(cds[i].parts[k]);
        }
        auto const path = dir / (name + "." + fmt);
        auto f = open_out(path.string());
        f << render(tpms[i]);
        out << path.string() << '\n';
      }
    };
  });

  // ei
  auto *ei = app.add_subcommand("ei", "Determinism, degeneracy and EI of a TPM file");
  std::string ei_tpm;
  ei->add_option("--tpm", ei_tpm, "TPM file (.json or CSV)")->required();
  ei->callback([&] {
    action = [&] {
      auto const t = load_tpm(ei_tpm);
      Report r(common.precision);
      r.integer("n", t.variables());
      add_metrics(r, metrics(t));
      r.print(out, format_or(common, "text", {"text", "json", "csv"}));
    };
  });

  // det-curve
  auto *dc = app.add_subcommand("det-curve", "Closed-form vs matrix determinism along x");
  struct
  {
    int n{4};
    int points{kGridPoints};
    std::string out;
  } d;
  dc->add_option("--n", d.n, "Variable count")->required();
  dc->add_option("--points", d.points, "Number of x values from 1 to 0.5")->capture_default_str();
  dc->add_option("--out", d.out, "CSV path (default stdout)");
  dc->callback([&] {
    action = [&] {
      check_n(d.n);
      SweepOptions o;
      o.n = d.n;
      o.points = d.points;
      auto t = sweep(9, o);
      t.columns = {"x", "closed_determinism", "matrix_determinism"};
      for (auto &row : t.rows) { row = {row[0], row[2], row[3]}; }
      auto const fmt = format_or(common, "csv", {"csv", "json"});
      emit(d.out, out, [&](std::ostream &os) { write_table(os, t, common.precision, fmt); });
    };
  });

  // solve
  auto *sol = app.add_subcommand("solve", "Find (x, deg_vector) reaching a target EI");
  struct
  {
    int n{2};
    double ei{0};
    double tolerance{1e-6};
    std::string method{"cqe"};
    std::vector<std::string> degs;
  } s;
  sol->add_option("--n", s.n, "Variable count")->required();
  sol->add_option("--ei", s.ei, "Target EI in bits")->required();
  sol->add_option("--tolerance", s.tolerance, "Accepted |EI gap| in bits")->capture_default_str();
  sol->add_option("--method", s.method, "tpm or cqe")->check(CLI::IsMember({"tpm", "cqe"}))->capture_default_str();
  sol->add_option("--deg", s.degs, "Restrict to these deg_vectors (FD,SUMCD), in order");
  sol->callback([&] {
    action = [&] {
      check_n(s.n);
      SolverOptions o;
      o.tolerance = s.tolerance;
      o.threads = resolve_threads(common);
      for (auto const &t : s.degs) { o.deg_vectors.push_back(parse_deg(t)); }
      auto const res = s.method == "tpm" ? tpm_solver(s.n, s.ei, o) : cqe_solver(s.n, s.ei, o);
      auto const &hit = res.found() ? *res.match : res.closest;
      Report r(common.precision);
      r.flag("found", res.found());
      r.num("x", hit.x).num("uncertainty_bits", uncertainty(hit.x));
      r.integer("fd", hit.dv.fd).integer("cd_sum", hit.dv.cd_sum);
      r.raw("cd", ordered_json(hit.cd.parts), cd_text(hit.cd));
      r.num("determinism", hit.metrics.determinism).num("degeneracy", hit.metrics.degeneracy);
      r.num("ei", hit.metrics.ei);
      r.integer("iterations", static_cast<long long>(res.found() ? hit.iterations : res.iterations));
      if (!res.found()) {
        r.num("gap", res.closest_gap);
        err << "no grid point reaches EI " << s.ei << " within " << s.tolerance << "; closest miss shown\n";
        status = kExitNotFound;
      }
      r.print(out, format_or(common, "json", {"text", "json", "csv"}));
    };
  });

  // vector-gen
  auto *vg = app.add_subcommand("vector-gen", "Find the deg_vector reaching a target degeneracy at fixed x");
  struct
  {
    int n{2};
    double deg{0};
    double x{1.0};
    double tolerance{1e-6};
  } v;
  vg->add_option("--n", v.n, "Variable count")->required();
  vg->add_option("--deg", v.deg, "Target degeneracy")->required();
  vg->add_option("--x", v.x, "Uncertainty parameter")->required();
  vg->add_option("--tolerance", v.tolerance, "Accepted degeneracy gap")->capture_default_str();
  vg->callback([&] {
    action = [&] {
      check_n(v.n);
      auto const res = vector_generator(v.n, v.deg, v.x, v.tolerance);
      auto const &hit = res.found() ? *res.match : res.closest;
      Report r(common.precision);
      r.flag("found", res.found());
      r.integer("fd", hit.dv.fd).integer("cd_sum", hit.dv.cd_sum);
      r.raw("cd", ordered_json(hit.cd.parts), cd_text(hit.cd));
      r.num("degeneracy", hit.degeneracy);
      r.integer("iterations", static_cast<long long>(res.found() ? hit.iterations : res.iterations));
      if (!res.found()) {
        r.num("gap", res.closest_gap);
        err << "no deg_vector reaches degeneracy " << v.deg << " within " << v.tolerance << "; closest miss shown\n";
        status = kExitNotFound;
      }
      r.print(out, format_or(common, "json", {"text", "json", "csv"}));
    };
  });

  // threshold
  auto *th = app.add_subcommand("threshold", "Absolute threshold, equivalent threshold or degeneracy boundary");
  th->require_subcommand(1);
  struct
  {
    int micro{3};
    int macro{2};
    double deg{0};
    double ei{0};
    double deg_macro{0};
  } t;
  auto print_value = [&](std::string const &key, double value) {
    auto const fmt = format_or(common, "text", {"text", "json", "csv"});
    if (fmt == "text") {
      out << fixed(value, common.precision) << '\n';
    } else {
      Report(common.precision).num(key, value).print(out, fmt);
    }
  };
  auto *at = th->add_subcommand("at", "Absolute threshold in bits");
  at->add_option("--micro", t.micro, "Micro variable count")->required();
  at->add_option("--macro", t.macro, "Macro variable count")->required();
  at->add_option("--deg", t.deg, "Micro degeneracy")->capture_default_str();
  at->callback([&] { action = [&] { print_value("at_bits", absolute_threshold(t.micro, t.macro, t.deg)); }; });
  auto *et = th->add_subcommand("et", "Equivalent threshold in bits");
  et->add_option("--ei", t.ei, "Micro EI in bits")->required();
  et->add_option("--macro", t.macro, "Macro variable count")->required();
  et->add_option("--deg-macro", t.deg_macro, "Macro degeneracy")->capture_default_str();
  et->callback([&] { action = [&] { print_value("et_bits", equivalent_threshold(t.ei, t.macro, t.deg_macro)); }; });
  auto *db = th->add_subcommand("db", "Degeneracy boundary");
  db->add_option("--micro", t.micro, "Micro variable count")->required();
  db->add_option("--macro", t.macro, "Macro variable count")->required();
  db->callback([&] { action = [&] { print_value("db", degeneracy_boundary(t.micro, t.macro)); }; });

  // sweep
  auto *sw = app.add_subcommand("sweep", "Data series behind a threshold figure");
  struct
  {
    int figure{11};
    std::string out;
    SweepOptions o;
  } w;
  sw->add_option("--figure", w.figure, "9, 11, 12, 14, 15 or 16")->required()->check(CLI::IsMember(sweep_figures()));
  sw->add_option("--out", w.out, "CSV path (default stdout)");
  sw->add_option("--points", w.o.points, "Points along the independent axis")->capture_default_str();
  sw->add_option("--n", w.o.n, "Variable count for figure 9")->capture_default_str();
  sw->add_option("--micro", w.o.n_micro, "Micro variable count for figures 15, 16")->capture_default_str();
  sw->add_option("--macro", w.o.n_macro, "Macro variable count for figures 15, 16")->capture_default_str();
  sw->add_option("--micro-uncertainty", w.o.micro_uncertainty, "Micro uncertainty (bits) for figure 16's ET")
    ->capture_default_str();
  sw->callback([&] {
    action = [&] {
      auto const table = sweep(w.figure, w.o);
      auto const fmt = format_or(common, "csv", {"csv", "json"});
      emit(w.out, out, [&](std::ostream &os) { write_table(os, table, common.precision, fmt); });
    };
  });

  // coarsen
  auto *co = app.add_subcommand("coarsen", "Coarse-grain a TPM by a mapping file or gate expression");
  struct
  {
    std::string tpm;
    std::string map;
    std::string out;
  } c;
  co->add_option("--tpm", c.tpm, "Micro TPM file")->required();
  co->add_option("--map", c.map, "Mapping file (.json or CSV) or gate expression like M1=AND(m0,m1);M2=OR(m2)")
    ->required();
  co->add_option("--out", c.out, "Write the macro TPM here");
  co->callback([&] {
    action = [&] {
      auto const micro = load_tpm(c.tpm);
      CoarseMapping cm;
      std::string how;
      if (std::filesystem::exists(c.map)) {
        cm = load_mapping(c.map);
        how = c.map;
      } else {
        auto const agg = parse_gate_expr(c.map);
        cm = aggregation_mapping(agg, micro.variables());
        how = to_string(agg);
      }
      auto const macro = apply_mapping(micro, cm);
      if (!c.out.empty()) { save_tpm(c.out, macro); }
      auto const mm = metrics(micro);
      auto const mM = metrics(macro);
      Report r(common.precision);
      r.text("mapping", how).raw("map", map_json(cm), map_text(cm));
      r.integer("n_micro", cm.n_micro).integer("n_macro", cm.n_macro);
      r.num("micro_determinism", mm.determinism).num("micro_degeneracy", mm.degeneracy).num("micro_ei", mm.ei);
      r.num("macro_determinism", mM.determinism).num("macro_degeneracy", mM.degeneracy).num("macro_ei", mM.ei);
      r.num("delta_ei", mM.ei - mm.ei).flag("ce", mM.ei - mm.ei > 0);
      auto const fmt = format_or(common, "text", {"text", "json", "csv"});
      r.print(out, fmt);
      if (fmt == "text" && c.out.empty()) { out << tpm_to_csv(macro, common.precision + 1); }
    };
  });

  // search-macro
  auto *sm = app.add_subcommand("search-macro", "Brute-force the best macro mapping");
  struct
  {
    std::string tpm;
    int n_macro{1};
    bool force{false};
  } m;
  sm->add_option("--tpm", m.tpm, "Micro TPM file")->required();
  sm->add_option("--n-macro", m.n_macro, "Macro variable count")->required();
  sm->add_flag("--force", m.force, "Lift the micro size guard");
  sm->callback([&] {
    action = [&] {
      auto const micro = load_tpm(m.tpm);
      int guard = kBestMacroGuard;
      if (m.force) {
        guard = kMaxVariables;
        err << "warning: brute force over " << micro.states() << " micro states may take very long\n";
      }
      auto const best = best_macro(micro, m.n_macro, guard, m.force ? UINT64_MAX : kBestMacroMappingCap);
      double const micro_ei = effective_information(micro);
      Report r(common.precision);
      r.raw("map", map_json(best.mapping), map_text(best.mapping));
      r.num("macro_ei", best.ei).num("micro_ei", micro_ei).num("delta_ei", best.ei - micro_ei);
      r.flag("ce", best.ei - micro_ei > 0).integer("evaluated", static_cast<long long>(best.evaluated));
      r.print(out, format_or(common, "text", {"text", "json", "csv"}));
    };
  });

  // dataset
  auto *ds = app.add_subcommand("dataset", "Export training records in the six feature formats");
  struct
  {
    int n{2};
    int samples{1};
    std::uint64_t seed{0};
    std::string features{"all"};
    std::string out_dir{"."};
    std::size_t max_dvs{0};
    bool split{false};
    std::size_t train{360};
    std::size_t test{40};
  } dd;
  ds->add_option("--n", dd.n, "Variable count (2..11)")->required();
  ds->add_option("--samples", dd.samples, "x samples per deg_vector")->capture_default_str();
  ds->add_option("--seed", dd.seed, "Seed")->capture_default_str();
  ds->add_option("--features", dd.features, "Orig, Exp, Log, Neg_Orig, Neg_Exp, Neg_Log or all")
    ->capture_default_str();
  ds->add_option("--out-dir", dd.out_dir, "Directory for the CSV files")->capture_default_str();
  ds->add_option("--max-dvs", dd.max_dvs, "Seeded subset of deg_vectors (0 = all)")->capture_default_str();
  ds->add_flag("--split", dd.split, "Also write seeded train/test files");
  ds->add_option("--train", dd.train, "Training records with --split")->capture_default_str();
  ds->add_option("--test", dd.test, "Test records with --split")->capture_default_str();
  ds->callback([&] {
    action = [&] {
      DatasetOptions o;
      o.samples_per_dv = dd.samples;
      o.seed = dd.seed;
      o.max_deg_vectors = dd.max_dvs;
      o.threads = resolve_threads(common);
      std::vector<FeatureFormat> formats;
      if (dd.features == "all") {
        auto const all = all_feature_formats();
        formats.assign(all.begin(), all.end());
      } else {
        formats.push_back(parse_feature_format(dd.features));
      }
      auto const records = generate_dataset(dd.n, o);
      std::optional<Split> parts;
      if (dd.split) { parts = split(records, dd.seed, dd.train, dd.test); }
      std::filesystem::create_directories(dd.out_dir);
      for (auto const f : formats) {
        auto const stem = std::filesystem::path(dd.out_dir) / ("n" + std::to_string(dd.n) + "_" + to_string(f));
        auto write = [&](std::string const &suffix, std::vector<DatasetRecord> const &recs) {
          auto const path = stem.string() + suffix + ".csv";
          auto file = open_out(path);
          write_dataset_csv(file, recs, f, dd.n, dd.seed);
          out << path << '\n';
        };
        write("", records);
        if (parts) {
          write("_train", parts->train);
          write("_test", parts->test);
        }
      }
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (CLI::CallForHelp const &e) {
    out << app.help();
    return kExitOk;
  } catch (CLI::CallForAllHelp const &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (CLI::ParseError const &e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (action) { action(); }
  } catch (std::exception const &e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return status;
}

} // namespace ceq::cli
