#include "dbalign/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "dbalign/csv_io.hpp"
#include "dbalign/detectors.hpp"
#include "dbalign/error.hpp"
#include "dbalign/montecarlo.hpp"
#include "dbalign/recovery.hpp"
#include "dbalign/rng.hpp"
#include "dbalign/theory.hpp"

namespace dbalign::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Options {
  // model
  std::size_t n = 200;
  std::size_t d = 50;
  double rho = 0.7;
  std::uint64_t seed = 1;
  // algorithm
  double theta = 0.55;
  double beta = 0.5;
  double gamma = 0.0;
  double r = 0.3;
  int k_max = 40;
  std::optional<double> p_ref;
  std::string algo = "tc";
  std::string detector = "count";
  std::string kind = "recovery";
  std::string hypothesis = "h1";
  std::string perm = "identity";
  std::size_t trials = 100;
  unsigned threads = 0;
  // io
  std::string x_path, y_path, truth_path, out_path, out_prefix;
  std::string sweep_axis;
  std::string grid;
  std::string format = "csv";
};

// Writes to --out atomically when given, else to stdout.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty())
    out << text << std::flush;
  else
    atomic_write(o.out_path, text);
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Re-reads a CSV line as JSON with the header as keys, so both formats carry
// exactly the same fields and digits.
std::string csv_to_jsonl(const std::string& csv) {
  std::istringstream in(csv);
  std::string header, line, out;
  std::getline(in, header);
  std::vector<std::string> keys;
  {
    std::stringstream hs(header);
    std::string k;
    while (std::getline(hs, k, ',')) keys.push_back(k);
  }
  while (std::getline(in, line)) {
    json obj;
    std::size_t start = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const std::size_t comma = line.find(',', start);
      const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      start = comma == std::string::npos ? line.size() : comma + 1;
      if (cell.empty()) {
        obj[keys[i]] = nullptr;
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() + cell.size())
        obj[keys[i]] = v;
      else
        obj[keys[i]] = cell;
    }
    out += obj.dump() + '\n';
  }
  return out;
}

std::string formatted(const Options& o, const std::string& csv) {
  return o.format == "json" ? csv_to_jsonl(csv) : csv;
}

// ---------------------------------------------------------------------------

int cmd_generate(const Options& o, std::ostream& out) {
  ModelParams params;
  params.n = o.n;
  params.d = o.d;
  params.rho = o.rho;
  if (o.perm == "random") params.sigma = random_permutation(o.n, stream_seed(o.seed, ~0ULL));
  params.validate();
  const bool h1 = o.hypothesis == "h1";
  const DatabasePair db = h1 ? sample_h1(params, o.seed) : sample_h0(params, o.seed);

  std::ostringstream xs, ys;
  write_matrix_csv(xs, db.x);
  write_matrix_csv(ys, db.y);
  const std::string prefix = o.out_prefix;
  atomic_write(prefix + "_x.csv", xs.str());
  atomic_write(prefix + "_y.csv", ys.str());
  json summary{{"x", prefix + "_x.csv"}, {"y", prefix + "_y.csv"}, {"hypothesis", h1 ? "H1" : "H0"}};
  if (h1) {
    std::ostringstream ts;
    write_truth(ts, params.sigma_or_identity());
    atomic_write(prefix + "_truth.csv", ts.str());
    summary["truth"] = prefix + "_truth.csv";
  }
  out << summary.dump() << '\n';
  return kExitOk;
}

int cmd_detect(const Options& o, std::ostream& out) {
  const DatabasePair db = load_pair(o.x_path, o.y_path);
  json rec;
  Hypothesis h;
  if (parse_detector(o.detector) == Detector::Sop) {
    const auto cfg = SopTestConfig::make(db.n(), db.d(), o.gamma, o.rho);
    const double t = sop_statistic(db);
    h = sop_decide(t, cfg);
    rec = {{"detector", "sop"}, {"T", t}, {"threshold", cfg.threshold}};
  } else {
    CountTestConfig cfg{o.theta, o.beta, 0.0};
    cfg.p_ref = o.p_ref ? *o.p_ref : p_prob(static_cast<int>(db.d()), o.rho, o.theta);
    cfg.validate();
    const std::size_t n_stat = count_statistic(score_table(db), o.theta);
    h = count_decide(n_stat, db.n(), cfg);
    rec = {{"detector", "count"}, {"N", n_stat}, {"threshold", cfg.threshold(db.n())}, {"P", cfg.p_ref}};
  }
  rec["decision"] = to_string(h);
  out << rec.dump() << '\n';
  return h == Hypothesis::H1 ? 1 : 0;
}

int cmd_recover(const Options& o, std::ostream& out) {
  const DatabasePair db = load_pair(o.x_path, o.y_path, o.truth_path);
  const ScoreTable table = score_table(db);
  const Algorithm algo = parse_algorithm(o.algo);
  PartialAlignment a;
  switch (algo) {
    case Algorithm::TC: a = threshold_and_clean(table, o.theta); break;
    case Algorithm::ML: a = PartialAlignment::from_permutation(hungarian_max(table).sigma); break;
    case Algorithm::MP: a = maximum_path(table, o.r); break;
    case Algorithm::TwoStage:
      a = PartialAlignment::from_permutation(two_stage_full(table, o.theta).sigma);
      break;
  }
  std::ostringstream lines;
  write_alignment(lines, a);
  if (o.out_path.empty())
    out << lines.str();
  else
    atomic_write(o.out_path, lines.str());
  if (db.truth) {
    const AlignmentErrors e = evaluate_alignment(a, db.truth->sigma);
    out << json{{"algo", to_string(algo)}, {"size", e.size}, {"err1", e.err1}, {"err2", e.err2}}.dump()
        << '\n';
  }
  return kExitOk;
}

std::vector<double> default_grid(const std::string& axis, double rho) {
  std::vector<double> g;
  if (axis == "beta") {
    for (int i = 0; i < 100; ++i) g.push_back(0.001 + 0.01 * i);
  } else if (axis == "theta") {
    for (int i = 1; i < 100; ++i) g.push_back(0.01 * i);
  } else if (axis == "rho") {
    for (int i = 1; i < 20; ++i) g.push_back(0.05 * i);
  } else if (axis == "gamma") {
    const double top = 4.0 * rho * rho;
    for (int i = 1; i < 50; ++i) g.push_back(top * i / 50.0);
  }
  return g;
}

int cmd_bounds(const Options& o, const CLI::App& sub, std::ostream& out) {
  const std::string axis = o.sweep_axis;
  std::vector<double> grid = o.grid.empty() ? default_grid(axis, o.rho) : parse_grid(o.grid);
  if (axis.empty()) {
    if (sub.count("--grid")) throw InvalidArgument("--grid needs --sweep");
    grid = {0.0};
  }
  std::ostringstream csv;
  if (axis == "gamma") {
    csv << "n,d,rho,gamma,g_fa,g_md,fa_bound,md_bound\n";
    for (const double g : grid) {
      const SopExponents e = sop_g_functions(g, o.rho);
      const SopBounds b = sop_bounds(o.n, static_cast<int>(o.d), g, o.rho);
      csv << o.n << ',' << o.d << ',' << fmt("%.10g", o.rho) << ',' << fmt("%.10g", g) << ','
          << fmt("%.10g", e.g_fa) << ',' << fmt("%.10g", e.g_md) << ',' << fmt("%.10g", b.fa)
          << ',' << fmt("%.10g", b.md) << '\n';
    }
  } else {
    csv << bound_csv_header() << '\n';
    const int d = static_cast<int>(o.d);
    // P and Q do not depend on beta; compute them once for a beta sweep.
    std::optional<LocalProbs> fixed;
    if (axis != "theta" && axis != "rho") fixed = local_probs(d, o.rho, o.theta);
    for (const double v : grid) {
      double rho = o.rho, theta = o.theta, beta = o.beta;
      if (axis == "beta") beta = v;
      if (axis == "theta") theta = v;
      if (axis == "rho") rho = v;
      const LocalProbs pq = fixed ? *fixed : local_probs(d, rho, theta);
      write_bound_csv_row(csv, evaluate_bounds(o.n, d, rho, theta, beta, pq, o.k_max));
    }
  }
  emit(o, out, formatted(o, csv.str()));
  return kExitOk;
}

int cmd_experiment(const Options& o, std::ostream& out) {
  ExperimentSpec spec;
  spec.params.n = o.n;
  spec.params.d = o.d;
  spec.params.rho = o.rho;
  spec.kind = o.kind == "detection" ? ExperimentKind::Detection : ExperimentKind::Recovery;
  spec.detector = parse_detector(o.detector);
  spec.algorithm = parse_algorithm(o.algo);
  spec.theta = o.theta;
  spec.test_beta = o.beta;
  spec.gamma = o.gamma;
  spec.r = o.r;
  spec.p_ref = o.p_ref;
  spec.trials = o.trials;
  spec.seed = o.seed;
  spec.threads = o.threads;

  std::ostringstream csv;
  if (o.sweep_axis.empty()) {
    if (!o.grid.empty()) throw InvalidArgument("--grid needs --sweep");
    spec.validate();
    csv << experiment_csv_header() << '\n';
    write_experiment_csv_row(csv, run_experiment(spec));
    emit(o, out, formatted(o, csv.str()));
    return kExitOk;
  }
  const SweepAxis axis = parse_sweep_axis(o.sweep_axis);
  const std::vector<double> grid = parse_grid(o.grid);
  if (o.out_path.empty() && o.format == "csv") {
    // Stream rows as they finish.
    sweep(spec, axis, grid, out);
    return kExitOk;
  }
  sweep(spec, axis, grid, csv);
  emit(o, out, formatted(o, csv.str()));
  return kExitOk;
}

void add_model_flags(CLI::App& app, Options& o) {
  app.add_option("--n", o.n, "rows per database, n")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--d", o.d, "features per row, d")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--rho", o.rho, "correlation coefficient rho in (0,1)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> g;
  if (text.empty()) return g;
  auto num = [&](const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
      throw InvalidArgument("bad grid value '" + s + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw InvalidArgument("grid range must be start:stop:step");
    const double a = num(parts[0]), b = num(parts[1]), s = num(parts[2]);
    if (!(s > 0.0) || b < a) throw InvalidArgument("grid range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((b - a) / s + 1e-9));
    if (count > 1000000) throw InvalidArgument("grid too large");
    for (long i = 0; i <= count; ++i) g.push_back(a + s * static_cast<double>(i));
    return g;
  }
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ',')) g.push_back(num(p));
  return g;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{
      "Correlation detection and alignment recovery for Gaussian databases.\n"
      "Model: rows X_i, Y_j ~ N(0, I_d); under H1, Y_{sigma_i} = rho X_i + sqrt(1-rho^2) Z_i.",
      "dbalign"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dbalign 0.1.0");

  auto* gen = app.add_subcommand("generate", "draw a database pair (X, Y) and write it as CSV");
  add_model_flags(*gen, o);
  gen->add_option("--seed", o.seed, "64-bit seed")->capture_default_str();
  gen->add_option("--hypothesis", o.hypothesis, "h0 (independent) or h1 (correlated)")
      ->check(CLI::IsMember({"h0", "h1"}))
      ->capture_default_str();
  gen->add_option("--perm", o.perm, "ground truth sigma: identity or random")
      ->check(CLI::IsMember({"identity", "random"}))
      ->capture_default_str();
  gen->add_option("--out-prefix", o.out_prefix,
                  "writes PREFIX_x.csv, PREFIX_y.csv and, under h1, PREFIX_truth.csv (i,sigma_i, 1-based)")
      ->required();

  auto* det = app.add_subcommand(
      "detect", "decide H0/H1 for a pair; exit code 0 = H0, 1 = H1, plus one JSON line");
  det->add_option("--x", o.x_path, "CSV of X (n rows, d columns)")->required()->check(CLI::ExistingFile);
  det->add_option("--y", o.y_path, "CSV of Y")->required()->check(CLI::ExistingFile);
  det->add_option("--detector", o.detector,
                  "count: N(theta) >= beta n P; sop: T = sum_ij X_i'Y_j >= sqrt(gamma) d n / 2")
      ->check(CLI::IsMember({"count", "sop"}))
      ->capture_default_str();
  det->add_option("--rho", o.rho, "rho used for P(d,rho,theta) or the gamma range")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  det->add_option("--theta", o.theta, "dot threshold theta")->capture_default_str();
  det->add_option("--beta", o.beta, "count test fraction beta in (0,1)")->capture_default_str();
  det->add_option("--p-ref", o.p_ref, "override P in the threshold beta n P");
  det->add_option("--gamma", o.gamma, "sop parameter gamma in (0, 4 rho^2)");

  auto* rec = app.add_subcommand("recover", "estimate an alignment; writes 'i,j' lines (1-based)");
  rec->add_option("--x", o.x_path, "CSV of X")->required()->check(CLI::ExistingFile);
  rec->add_option("--y", o.y_path, "CSV of Y")->required()->check(CLI::ExistingFile);
  rec->add_option("--truth", o.truth_path, "truth file; adds a JSON summary {size, err1, err2}")
      ->check(CLI::ExistingFile);
  rec->add_option("--algo", o.algo,
                  "tc: threshold-and-clean, ml: Hungarian, mp: maximum-path, two-stage: tc then Hungarian")
      ->check(CLI::IsMember({"tc", "ml", "mp", "two-stage"}))
      ->capture_default_str();
  rec->add_option("--theta", o.theta, "dot threshold theta (tc, two-stage)")->capture_default_str();
  rec->add_option("--r", o.r, "fraction R kept by maximum-path, in (0,1]")->capture_default_str();
  rec->add_option("--out", o.out_path, "alignment file (default: stdout)");

  auto* bnd = app.add_subcommand(
      "bounds", "evaluate P, Q, type-I/II detection bounds and Pe1/Pe2 recovery bounds");
  add_model_flags(*bnd, o);
  bnd->add_option("--theta", o.theta, "dot threshold theta in [0,1]")->capture_default_str();
  bnd->add_option("--beta", o.beta, "test fraction beta in (0,1)")->capture_default_str();
  bnd->add_option("--k-max", o.k_max, "largest moment order k in the type-I minimization")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  bnd->add_option("--sweep", o.sweep_axis,
                  "beta, theta or rho (bound rows); gamma (sum-of-inner-products G_FA, G_MD)")
      ->check(CLI::IsMember({"beta", "theta", "rho", "gamma"}));
  bnd->add_option("--grid", o.grid, "values 'a,b,c' or 'start:stop:step' (default per axis)");
  bnd->add_option("--format", o.format, "csv or json (one object per line)")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  bnd->add_option("--out", o.out_path, "output file (default: stdout)");

  auto* exp = app.add_subcommand("experiment", "seeded Monte Carlo estimates, optionally swept");
  add_model_flags(*exp, o);
  exp->add_option("--kind", o.kind, "detection (P_FA, P_MD) or recovery (Pe1, Pe2, R-bar)")
      ->check(CLI::IsMember({"detection", "recovery"}))
      ->capture_default_str();
  exp->add_option("--detector", o.detector, "count or sop")
      ->check(CLI::IsMember({"count", "sop"}))
      ->capture_default_str();
  exp->add_option("--algo", o.algo, "tc, ml, mp or two-stage")
      ->check(CLI::IsMember({"tc", "ml", "mp", "two-stage"}))
      ->capture_default_str();
  exp->add_option("--theta", o.theta, "dot threshold theta")->capture_default_str();
  exp->add_option("--beta", o.beta, "count test fraction beta")->capture_default_str();
  exp->add_option("--gamma", o.gamma, "sop parameter gamma");
  exp->add_option("--r", o.r, "maximum-path fraction R")->capture_default_str();
  exp->add_option("--p-ref", o.p_ref, "override P in the count threshold");
  exp->add_option("--trials", o.trials, "Monte Carlo trials per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  exp->add_option("--seed", o.seed, "64-bit master seed")->capture_default_str();
  exp->add_option("--threads", o.threads, "worker threads (default: DBALIGN_THREADS or all cores)");
  exp->add_option("--sweep", o.sweep_axis, "theta, rho, beta, r, n or d");
  exp->add_option("--grid", o.grid, "values 'a,b,c' or 'start:stop:step'");
  exp->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  exp->add_option("--out", o.out_path, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(o, out);
    if (det->parsed()) return cmd_detect(o, out);
    if (rec->parsed()) return cmd_recover(o, out);
    if (bnd->parsed()) return cmd_bounds(o, *bnd, out);
    if (exp->parsed()) return cmd_experiment(o, out);
  } catch (const NumericError& e) {
    err << "dbalign: numeric failure: " << e.what() << " (achieved " << e.achieved_tolerance()
        << ")\n";
    return kExitNumeric;
  } catch (const ParseError& e) {
    err << "dbalign: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "dbalign: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"dbalign"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dbalign::cli
