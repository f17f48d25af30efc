// torus-resonance: batch front end for resonance counting, condition scans,
// the Fourier-space solve and the Monte Carlo expectation studies.
//
// Usage:
//   torus-resonance count    --x 0.5 --y 0.5 --v 1 --k 2 [--witnesses w.csv]
//   torus-resonance scan     --equation schrodinger|wave [--form quadratic|factored] --x .. --y .. --v .. --k ..
//   torus-resonance solve    --input f.json --solution u.json (--alpha --beta --gamma [--mass --hbar] | --x --y [--gamma --hbar])
//   torus-resonance expect   --seed S --n-samples N --v V --k K [--j-max J] [--samples-csv s.csv] [--blocks-csv b.csv]
//   torus-resonance plotdata --seed S --n-samples N --v V --k-max K [--csv-prefix P]
//
// Every command writes a JSON document to --output (stdout when omitted).
// Outputs are byte-identical for identical flags at any --threads value.
//
// Exit codes: 0 success, 2 usage, 3 numeric range, 4 solvability/resonance, 5 I/O.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "torus_resonance/torus_resonance.hpp"

namespace tr = torus_resonance;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kRange = 3, kSolvability = 4, kIo = 5 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Temp file next to the target, then rename.
void write_atomically(std::string const& path, std::string const& content) {
  std::filesystem::path const target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename onto " + path + ": " + ec.message());
  }
}

std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

tr::SplitReal parse_real_flag(std::string const& name, std::string const& text) {
  auto r = tr::parse_real(text);
  if (!r) throw UsageError("--" + name + ": cannot parse real number '" + text + "'");
  return *r;
}

void require_positive(char const* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string("--") + name + " must be positive and finite");
}

struct Common {
  std::string output;
  unsigned threads = 1;
  bool record_timing = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--output", output, "Output JSON path (stdout when omitted)");
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    cmd->add_flag("--record-timing", record_timing, "Embed wall-clock duration in the output JSON");
  }

  tr::ScanOptions scan() const { return {threads}; }
};

json envelope(char const* command, json config) {
  json j;
  j["command"] = command;
  j["version"] = tr::kVersion;
  j["config"] = std::move(config);
  return j;
}

void emit(Common const& common, json doc, char const* command, std::chrono::steady_clock::time_point start) {
  double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (common.record_timing) doc["timing"] = {{"wall_clock_seconds", seconds}};
  std::string const text = doc.dump(2) + "\n";
  if (common.output.empty()) {
    std::cout << text;
  } else {
    write_atomically(common.output, text);
  }
  std::cerr << command << ": completed in " << fmt_double(seconds) << " s\n";
}

json params_json(tr::DenominatorParams const& p) {
  return {{"x", tr::format_real(p.x)}, {"y", tr::format_real(p.y)}};
}

// ---------------------------------------------------------------- count

struct CountArgs {
  Common common;
  std::string x, y;
  double v = 0.0;
  std::uint64_t k = 0;
  std::string witnesses;
};

int run_count(CountArgs const& args) {
  auto const start = std::chrono::steady_clock::now();
  require_positive("v", args.v);
  if (args.k < 1) throw UsageError("--k must be at least 1");
  tr::DenominatorParams const p{parse_real_flag("x", args.x), parse_real_flag("y", args.y)};
  bool const want = !args.witnesses.empty();
  auto const rep = tr::count_resonances(p, args.v, args.k, want, args.common.scan());

  json config = params_json(p);
  config["v"] = args.v;
  config["k"] = args.k;
  config["witnesses"] = want;
  json doc = envelope("count", std::move(config));
  json result;
  result["k"] = rep.k;
  result["v"] = rep.v;
  result["count"] = rep.count;
  result["predicted"] = rep.predicted;
  result["exact_expectation"] = tr::experiments::exact_expectation(rep.k, rep.v);
  if (rep.witnesses) result["witness_count"] = rep.witnesses->size();
  doc["result"] = std::move(result);

  if (want) {
    std::string csv = "a,b,dist,threshold,nearest_c\n";
    for (auto const& w : *rep.witnesses) {
      csv += std::to_string(w.a) + "," + std::to_string(w.b) + "," + fmt_double(w.dist) + "," +
             fmt_double(w.threshold) + "," + std::to_string(w.nearest_c) + "\n";
    }
    write_atomically(args.witnesses, csv);
  }
  emit(args.common, std::move(doc), "count", start);
  return kOk;
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  Common common;
  std::string equation = "schrodinger";
  std::string form = "quadratic";
  std::string x, y;
  double v = 0.0;
  std::uint64_t k = 0;
};

int run_scan(ScanArgs const& args) {
  auto const start = std::chrono::steady_clock::now();
  require_positive("v", args.v);
  if (args.k < 1) throw UsageError("--k must be at least 1");
  tr::DenominatorParams const p{parse_real_flag("x", args.x), parse_real_flag("y", args.y)};
  tr::MarginResult res;
  if (args.equation == "schrodinger") {
    res = tr::c2_margin_scan(p, args.v, args.k, args.common.scan());
  } else {
    auto const form = args.form == "factored" ? tr::WaveForm::factored : tr::WaveForm::quadratic;
    res = tr::wave_condition_scan(p, args.v, args.k, form, args.common.scan());
  }
  json config = params_json(p);
  config["equation"] = args.equation;
  if (args.equation == "wave") config["form"] = args.form;
  config["v"] = args.v;
  config["k"] = args.k;
  json doc = envelope("scan", std::move(config));
  doc["result"] = {{"min_margin", res.min_margin},
                   {"argmin", {{"a", res.argmin.a}, {"b", res.argmin.b}, {"c", res.argmin.c}}}};
  emit(args.common, std::move(doc), "scan", start);
  return kOk;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  Common common;
  std::string input;
  std::string solution;
  std::optional<double> alpha, beta, mass;
  std::optional<std::string> x, y;
  double gamma = 2.0 * std::numbers::pi;
  double hbar = 1.0;
  std::optional<double> min_denominator;
};

int run_solve(SolveArgs const& args) {
  auto const start = std::chrono::steady_clock::now();
  bool const physical = args.alpha || args.beta;
  bool const reduced = args.x || args.y;
  if (physical == reduced) throw UsageError("give either --alpha/--beta or --x/--y");
  if (physical && !(args.alpha && args.beta)) throw UsageError("--alpha and --beta go together");
  if (reduced && !(args.x && args.y)) throw UsageError("--x and --y go together");
  require_positive("gamma", args.gamma);
  require_positive("hbar", args.hbar);

  tr::spectral::SolverGeometry geom;
  json config;
  if (physical) {
    tr::spectral::TorusGeometry const torus{*args.alpha, *args.beta, args.gamma, args.mass.value_or(1.0), args.hbar};
    try {
      torus.validate();
    } catch (tr::DomainError const& e) {
      throw UsageError(e.what());
    }
    geom = tr::spectral::SolverGeometry::from_torus(torus);
    config["alpha"] = torus.alpha;
    config["beta"] = torus.beta;
    config["mass"] = torus.mass;
  } else {
    geom.params = {parse_real_flag("x", *args.x), parse_real_flag("y", *args.y)};
    geom.gamma = args.gamma;
    geom.hbar = args.hbar;
  }
  config["reduced"] = params_json(geom.params);
  config["gamma"] = geom.gamma;
  config["hbar"] = geom.hbar;
  double const floor = args.min_denominator.value_or(tr::spectral::default_min_denominator(geom.params));
  config["min_denominator"] = floor;

  tr::spectral::FourierField f;
  try {
    f = tr::spectral::field_from_json(json::parse(read_file(args.input)));
  } catch (json::exception const& e) {
    throw IoError(std::string("cannot parse ") + args.input + ": " + e.what());
  } catch (tr::spectral::FieldFormatError const& e) {
    throw IoError(args.input + ": " + e.what());
  }
  auto const u = tr::spectral::solve_schrodinger(f, geom, floor);
  double const residual = tr::spectral::round_trip_residual(f, u, geom);
  auto const decay_f = tr::spectral::decay_report(f, 2);
  auto const decay_u = tr::spectral::decay_report(u, 2);

  std::size_t forced = 0;
  for (auto const& c : f.coefficients()) forced += c != tr::spectral::complex{} ? 1 : 0;

  write_atomically(args.solution, tr::spectral::field_to_json(u).dump(2) + "\n");
  json doc = envelope("solve", std::move(config));
  doc["result"] = {{"box_radius", u.box_radius()},
                   {"forced_modes", forced},
                   {"max_relative_residual", residual},
                   {"forcing_sup_norm_p2", decay_f.sup_norm},
                   {"solution_sup_norm_p2", decay_u.sup_norm}};
  emit(args.common, std::move(doc), "solve", start);
  return kOk;
}

// ---------------------------------------------------------------- expect

struct ExpectArgs {
  Common common;
  std::optional<std::uint64_t> seed;
  std::uint64_t n_samples = 100;
  double v = 0.0;
  std::uint64_t k = 0;
  std::optional<unsigned> j_max;
  std::string samples_csv;
  std::string blocks_csv;
};

int run_expect(ExpectArgs const& args) {
  auto const start = std::chrono::steady_clock::now();
  if (!args.seed) throw UsageError("--seed is required");
  require_positive("v", args.v);
  if (args.k < 1) throw UsageError("--k must be at least 1");
  if (args.n_samples < 1) throw UsageError("--n-samples must be at least 1");
  tr::experiments::SampleSpec const spec{*args.seed, args.n_samples, args.v, args.k};
  auto const rep = tr::experiments::expectation_experiment(spec, args.common.scan());

  json config{{"seed", spec.seed}, {"n_samples", spec.n_samples}, {"v", spec.v}, {"k", spec.k}};
  bool const tail = args.j_max.has_value() || !args.blocks_csv.empty();
  unsigned j_max = 0;
  if (tail) {
    j_max = args.j_max.value_or(std::max(2u, static_cast<unsigned>(std::floor(std::log2(double(args.k) + 1.0)))));
    config["j_max"] = j_max;
  }
  json doc = envelope("expect", std::move(config));
  json e;
  e["empirical_mean"] = rep.empirical_mean;
  e["empirical_sd"] = rep.empirical_sd;
  e["standard_error"] = rep.standard_error();
  e["exact_expectation"] = rep.exact_expectation;
  e["eq4_prediction"] = rep.eq4_prediction;
  e["n_samples"] = rep.n_samples;
  e["within_3se_of_exact"] = std::abs(rep.empirical_mean - rep.exact_expectation) <= 3.0 * rep.standard_error();
  e["outliers"] = rep.outliers;
  doc["expectation"] = std::move(e);

  if (!args.samples_csv.empty()) {
    std::string csv = "sample_index,x_hex,y_hex,count\n";
    for (auto const& s : rep.samples) {
      csv += std::to_string(s.index) + "," + s.params.x.frac.to_hex() + "," + s.params.y.frac.to_hex() + "," +
             std::to_string(s.count) + "\n";
    }
    write_atomically(args.samples_csv, csv);
  }

  if (tail) {
    auto const t = tr::experiments::tail_transition_experiment(spec.seed, spec.v, j_max, spec.n_samples,
                                                               args.common.scan());
    json blocks = json::array();
    std::string csv = "block_lo,block_hi,empirical_mean,standard_error,exact_expectation\n";
    for (auto const& b : t.blocks) {
      blocks.push_back({{"lo", b.lo},
                        {"hi", b.hi},
                        {"empirical_mean", b.empirical_mean},
                        {"standard_error", b.standard_error},
                        {"exact_expectation", b.exact_expectation},
                        {"within_3se", b.within_3se()}});
      csv += std::to_string(b.lo) + "," + std::to_string(b.hi) + "," + fmt_double(b.empirical_mean) + "," +
             fmt_double(b.standard_error) + "," + fmt_double(b.exact_expectation) + "\n";
    }
    doc["tail"] = {{"blocks", std::move(blocks)},
                   {"all_within_3se", t.all_within_3se()},
                   {"empirical_increasing", t.empirical_increasing()},
                   {"empirical_decreasing", t.empirical_decreasing()}};
    if (!args.blocks_csv.empty()) write_atomically(args.blocks_csv, csv);
  }
  emit(args.common, std::move(doc), "expect", start);
  return kOk;
}

// ---------------------------------------------------------------- plotdata

struct PlotArgs {
  Common common;
  std::optional<std::uint64_t> seed;
  std::uint64_t n_samples = 100;
  double v = 1.0;
  std::uint64_t k_max = 0;
  std::string csv_prefix;
};

int run_plotdata(PlotArgs const& args) {
  auto const start = std::chrono::steady_clock::now();
  if (!args.seed) throw UsageError("--seed is required");
  require_positive("v", args.v);
  if (args.k_max < 1) throw UsageError("--k-max must be at least 1");
  if (args.n_samples < 1) throw UsageError("--n-samples must be at least 1");
  std::string prefix = args.csv_prefix;
  if (prefix.empty()) {
    if (args.common.output.empty()) throw UsageError("--csv-prefix is required when writing JSON to stdout");
    prefix = std::filesystem::path(args.common.output).replace_extension().string();
  }
  auto const points = tr::experiments::count_curves(*args.seed, args.v, tr::experiments::log_spaced_ks(args.k_max),
                                                    args.n_samples, args.common.scan());

  std::string empirical = "k,value\n", expected = "k,value\n", eq4 = "k,value\n";
  json curve = json::array();
  bool consistent = true;
  for (auto const& pt : points) {
    std::string const k = std::to_string(pt.k) + ",";
    empirical += k + fmt_double(pt.empirical_mean) + "\n";
    expected += k + fmt_double(pt.exact_expectation) + "\n";
    eq4 += k + fmt_double(pt.eq4_prediction) + "\n";
    consistent = consistent && pt.within_3se();
    curve.push_back({{"k", pt.k},
                     {"empirical_mean", pt.empirical_mean},
                     {"standard_error", pt.standard_error},
                     {"exact_expectation", pt.exact_expectation},
                     {"eq4_prediction", pt.eq4_prediction},
                     {"within_3se", pt.within_3se()}});
  }
  write_atomically(prefix + "_empirical.csv", empirical);
  write_atomically(prefix + "_expected.csv", expected);
  write_atomically(prefix + "_eq4.csv", eq4);

  json doc = envelope("plotdata", {{"seed", *args.seed}, {"n_samples", args.n_samples}, {"v", args.v}, {"k_max", args.k_max}});
  doc["result"] = {{"points", std::move(curve)}, {"empirical_within_3se_of_exact", consistent}};
  emit(args.common, std::move(doc), "plotdata", start);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-denominator resonances of the Schrödinger equation on the 2-torus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tr::kVersion);

  CountArgs count;
  auto* c = app.add_subcommand("count", "Count resonant pairs N(k, v; x, y)");
  count.common.add_to(c);
  c->add_option("--x", count.x, "x (decimal, p/q, sqrt:N[±K], or [int+]fp:0x<hex>)")->required();
  c->add_option("--y", count.y, "y")->required();
  c->add_option("--v", count.v, "Exponent v > 0")->required();
  c->add_option("--k", count.k, "Range 1 <= a, b <= k")->required();
  c->add_option("--witnesses", count.witnesses, "Witness CSV path");

  ScanArgs scan;
  auto* s = app.add_subcommand("scan", "Best Diophantine-condition margin over a box");
  scan.common.add_to(s);
  s->add_option("--equation", scan.equation)->check(CLI::IsMember({"schrodinger", "wave"}));
  s->add_option("--form", scan.form)->check(CLI::IsMember({"quadratic", "factored"}));
  s->add_option("--x", scan.x)->required();
  s->add_option("--y", scan.y)->required();
  s->add_option("--v", scan.v)->required();
  s->add_option("--k", scan.k)->required();

  SolveArgs solve;
  auto* so = app.add_subcommand("solve", "Solve in Fourier space for a forcing field");
  solve.common.add_to(so);
  so->add_option("--input", solve.input, "Forcing field JSON")->required();
  so->add_option("--solution", solve.solution, "Solution field JSON path")->required();
  so->add_option("--alpha", solve.alpha);
  so->add_option("--beta", solve.beta);
  so->add_option("--mass", solve.mass);
  so->add_option("--x", solve.x);
  so->add_option("--y", solve.y);
  so->add_option("--gamma", solve.gamma, "Time period (default 2π)");
  so->add_option("--hbar", solve.hbar);
  so->add_option("--min-denominator", solve.min_denominator);

  ExpectArgs expect;
  auto* e = app.add_subcommand("expect", "Monte Carlo mean of N against its exact expectation");
  expect.common.add_to(e);
  e->add_option("--seed", expect.seed);
  e->add_option("--n-samples", expect.n_samples);
  e->add_option("--v", expect.v)->required();
  e->add_option("--k", expect.k)->required();
  e->add_option("--j-max", expect.j_max, "Dyadic blocks [2^j, 2^(j+1)), j < j_max");
  e->add_option("--samples-csv", expect.samples_csv);
  e->add_option("--blocks-csv", expect.blocks_csv);

  PlotArgs plot;
  auto* pd = app.add_subcommand("plotdata", "Plot-ready CSV series of N(k) curves");
  plot.common.add_to(pd);
  pd->add_option("--seed", plot.seed);
  pd->add_option("--n-samples", plot.n_samples);
  pd->add_option("--v", plot.v);
  pd->add_option("--k-max", plot.k_max)->required();
  pd->add_option("--csv-prefix", plot.csv_prefix);

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& ex) {
    return app.exit(ex);
  } catch (CLI::CallForAllHelp const& ex) {
    return app.exit(ex);
  } catch (CLI::CallForVersion const& ex) {
    return app.exit(ex);
  } catch (CLI::ParseError const& ex) {
    app.exit(ex);
    return kUsage;
  }

  try {
    if (c->parsed()) return run_count(count);
    if (s->parsed()) return run_scan(scan);
    if (so->parsed()) return run_solve(solve);
    if (e->parsed()) return run_expect(expect);
    if (pd->parsed()) return run_plotdata(plot);
  } catch (UsageError const& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (tr::RangeError const& ex) {
    std::cerr << "range error: " << ex.what() << "\n";
    return kRange;
  } catch (tr::SolvabilityError const& ex) {
    std::cerr << "solvability error: " << ex.what() << "\n";
    return kSolvability;
  } catch (tr::ResonanceError const& ex) {
    std::cerr << "resonance error: " << ex.what() << "\n";
    return kSolvability;
  } catch (tr::DomainError const& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (IoError const& ex) {
    std::cerr << "I/O error: " << ex.what() << "\n";
    return kIo;
  } catch (std::filesystem::filesystem_error const& ex) {
    std::cerr << "I/O error: " << ex.what() << "\n";
    return kIo;
  }
  return kUsage;
}
