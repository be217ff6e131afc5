#include "dbalign/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "dbalign/detectors.hpp"
#include "dbalign/error.hpp"
#include "dbalign/hungarian.hpp"
#include "dbalign/recovery.hpp"
#include "dbalign/rng.hpp"
#include "dbalign/special.hpp"
#include "dbalign/theory.hpp"

namespace dbalign {

namespace {

// Runs body(t) for t in [0, trials) on `threads` workers. Each trial writes
// only its own slot, so the merged result is independent of scheduling.
template <class Body>
void parallel_trials(std::size_t trials, unsigned threads, Body&& body) {
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));
  if (threads <= 1) {
    for (std::size_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    try {
      for (std::size_t t = next++; t < trials; t = next++) body(t);
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next = trials;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ModelParams identity_params(const ModelParams& p) {
  ModelParams out = p;
  out.sigma.reset();
  return out;
}

struct TrialOutcome {
  bool err1 = false;
  bool err2 = false;
  std::uint32_t size = 0;
};

}  // namespace

const char* to_string(ExperimentKind k) noexcept {
  return k == ExperimentKind::Detection ? "detection" : "recovery";
}

const char* to_string(Detector d) noexcept { return d == Detector::Count ? "count" : "sop"; }

const char* to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::TC: return "tc";
    case Algorithm::ML: return "ml";
    case Algorithm::MP: return "mp";
    case Algorithm::TwoStage: return "two-stage";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  if (s == "tc") return Algorithm::TC;
  if (s == "ml") return Algorithm::ML;
  if (s == "mp") return Algorithm::MP;
  if (s == "two-stage") return Algorithm::TwoStage;
  throw InvalidArgument("unknown algorithm '" + std::string(s) + "' (tc|ml|mp|two-stage)");
}

Detector parse_detector(std::string_view s) {
  if (s == "count") return Detector::Count;
  if (s == "sop") return Detector::Sop;
  throw InvalidArgument("unknown detector '" + std::string(s) + "' (count|sop)");
}

void ExperimentSpec::validate() const {
  params.validate();
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
  if (kind == ExperimentKind::Detection) {
    if (detector == Detector::Count) {
      if (!(test_beta > 0.0 && test_beta < 1.0)) throw InvalidArgument("test_beta must lie in (0,1)");
      if (p_ref && !(*p_ref > 0.0 && *p_ref <= 1.0)) throw InvalidArgument("p_ref must lie in (0,1]");
    } else {
      SopTestConfig::make(params.n, params.d, gamma, params.rho);
    }
  } else if (algorithm == Algorithm::MP) {
    top_count(params.n, r);
  }
}

double RateEstimate::rate() const noexcept {
  return trials == 0 ? 0.0 : static_cast<double>(events) / static_cast<double>(trials);
}

double RateEstimate::std_error() const noexcept {
  if (trials == 0) return 0.0;
  const double p = rate();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double RateEstimate::upper95() const { return clopper_pearson_upper(events, trials); }

double clopper_pearson_upper(std::size_t events, std::size_t trials, double confidence) {
  if (trials == 0 || events >= trials) return 1.0;
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0,1)");
  const double alpha = 1.0 - confidence;
  const double k = static_cast<double>(events), n = static_cast<double>(trials);
  if (events == 0) return -std::expm1(std::log(alpha) / n);
  // Pr{Bin(n,p) <= k} = I_{1-p}(n-k, k+1), decreasing in p.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (special::ibeta(n - k, k + 1.0, 1.0 - mid) > alpha) lo = mid; else hi = mid;
  }
  return hi;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("DBALIGN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------

ExperimentResult estimate_detection(const ExperimentSpec& spec_in) {
  ExperimentSpec spec = spec_in;
  spec.kind = ExperimentKind::Detection;
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const ModelParams params = identity_params(spec.params);

  CountTestConfig count_cfg;
  SopTestConfig sop_cfg;
  if (spec.detector == Detector::Count) {
    if (!spec.p_ref) spec.p_ref = p_prob(static_cast<int>(params.d), params.rho, spec.theta);
    count_cfg = CountTestConfig{spec.theta, spec.test_beta, *spec.p_ref};
    count_cfg.validate();
  } else {
    sop_cfg = SopTestConfig::make(params.n, params.d, spec.gamma, params.rho);
  }
  auto decide = [&](const DatabasePair& db) {
    if (spec.detector == Detector::Sop) return sop_decide(sop_statistic(db), sop_cfg);
    return count_decide(count_statistic(score_table(db), spec.theta), params.n, count_cfg);
  };

  std::vector<char> fa(spec.trials), md(spec.trials);
  parallel_trials(spec.trials, spec.threads, [&](std::size_t t) {
    fa[t] = decide(sample_h0(params, stream_seed(spec.seed, 2 * t))) == Hypothesis::H1;
    md[t] = decide(sample_h1(params, stream_seed(spec.seed, 2 * t + 1))) == Hypothesis::H0;
  });

  ExperimentResult res;
  res.p_fa.trials = res.p_md.trials = spec.trials;
  for (std::size_t t = 0; t < spec.trials; ++t) {
    res.p_fa.events += static_cast<std::size_t>(fa[t]);
    res.p_md.events += static_cast<std::size_t>(md[t]);
  }
  res.spec = spec;
  res.wall_seconds = elapsed(start);
  return res;
}

std::vector<ExperimentResult> estimate_recovery(const ExperimentSpec& spec_in,
                                                std::span<const AlgorithmConfig> algorithms) {
  ExperimentSpec spec = spec_in;
  spec.kind = ExperimentKind::Recovery;
  spec.params.validate();
  if (spec.trials == 0) throw InvalidArgument("trials must be >= 1");
  const ModelParams params = identity_params(spec.params);
  const std::size_t n = params.n;
  for (const auto& a : algorithms) {
    if (a.algorithm == Algorithm::MP) top_count(n, a.r);
    if (!std::isfinite(a.theta)) throw InvalidArgument("theta must be finite");
  }
  const auto start = std::chrono::steady_clock::now();
  const Permutation truth = Permutation::identity(n);
  const std::size_t m = algorithms.size();
  const bool need_ml = std::any_of(algorithms.begin(), algorithms.end(), [](const auto& a) {
    return a.algorithm == Algorithm::ML || a.algorithm == Algorithm::MP;
  });

  std::vector<TrialOutcome> out(spec.trials * m);
  parallel_trials(spec.trials, spec.threads, [&](std::size_t t) {
    const ScoreTable table = score_table(sample_h1(params, stream_seed(spec.seed, t)));
    std::optional<Permutation> ml;
    if (need_ml) ml = hungarian_max(table).sigma;
    for (std::size_t a = 0; a < m; ++a) {
      const AlgorithmConfig& cfg = algorithms[a];
      TrialOutcome& o = out[t * m + a];
      AlignmentErrors e;
      switch (cfg.algorithm) {
        case Algorithm::TC:
          e = evaluate_alignment(threshold_and_clean(table, cfg.theta), truth);
          break;
        case Algorithm::ML:
          e = evaluate_alignment(PartialAlignment::from_permutation(*ml), truth);
          break;
        case Algorithm::MP:
          e = evaluate_alignment(maximum_path(table, *ml, cfg.r), truth);
          break;
        case Algorithm::TwoStage: {
          const TwoStageResult ts = two_stage_full(table, cfg.theta);
          e = evaluate_alignment(PartialAlignment::from_permutation(ts.sigma), truth);
          e.size = ts.fixed.size();
          break;
        }
      }
      o.err1 = e.err1;
      o.err2 = e.err2;
      o.size = static_cast<std::uint32_t>(e.size);
    }
  });

  const double wall = elapsed(start);
  std::vector<ExperimentResult> results(m);
  for (std::size_t a = 0; a < m; ++a) {
    ExperimentResult& r = results[a];
    r.spec = spec;
    r.spec.algorithm = algorithms[a].algorithm;
    r.spec.theta = algorithms[a].theta;
    r.spec.r = algorithms[a].r;
    r.pe1.trials = r.pe2.trials = spec.trials;
    double total = 0.0;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      const TrialOutcome& o = out[t * m + a];
      r.pe1.events += o.err1;
      r.pe2.events += o.err2;
      total += o.size;
    }
    r.r_bar = total / (static_cast<double>(spec.trials) * static_cast<double>(n));
    r.wall_seconds = wall;
  }
  return results;
}

ExperimentResult estimate_recovery(const ExperimentSpec& spec) {
  spec.params.validate();
  if (spec.trials == 0) throw InvalidArgument("trials must be >= 1");
  const AlgorithmConfig cfg{spec.algorithm, spec.theta, spec.r};
  auto res = estimate_recovery(spec, std::span<const AlgorithmConfig>(&cfg, 1));
  return res.front();
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  return spec.kind == ExperimentKind::Detection ? estimate_detection(spec) : estimate_recovery(spec);
}

// ---------------------------------------------------------------------------

LocalRateEstimate estimate_local_rates(std::size_t d, double rho, std::span<const double> thetas,
                                       std::size_t trials, std::uint64_t seed, unsigned threads) {
  if (d == 0) throw InvalidArgument("d must be >= 1");
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in (0,1)");
  if (trials == 0) throw InvalidArgument("trials must be >= 1");
  const double c = std::sqrt(1.0 - rho * rho);
  std::vector<double> cos_q(trials), cos_p(trials);
  parallel_trials(trials, threads, [&](std::size_t t) {
    Rng rng(stream_seed(seed, t));
    std::vector<double> x(d), y(d), z(d);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    for (auto& v : z) v = rng.normal();
    double xx = 0, yy = 0, xy = 0, ww = 0, xw = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const double w = rho * x[k] + c * z[k];
      xx += x[k] * x[k];
      yy += y[k] * y[k];
      xy += x[k] * y[k];
      ww += w * w;
      xw += x[k] * w;
    }
    cos_q[t] = xy / std::sqrt(xx * yy);
    cos_p[t] = xw / std::sqrt(xx * ww);
  });
  LocalRateEstimate est;
  est.thetas.assign(thetas.begin(), thetas.end());
  for (const double th : thetas) {
    RateEstimate q{0, trials}, p{0, trials};
    for (std::size_t t = 0; t < trials; ++t) {
      q.events += cos_q[t] >= th;
      p.events += cos_p[t] >= th;
    }
    est.q.push_back(q);
    est.p.push_back(p);
  }
  return est;
}

// ---------------------------------------------------------------------------

SweepAxis parse_sweep_axis(std::string_view s) {
  if (s == "theta") return SweepAxis::Theta;
  if (s == "rho") return SweepAxis::Rho;
  if (s == "beta") return SweepAxis::Beta;
  if (s == "r") return SweepAxis::R;
  if (s == "n") return SweepAxis::N;
  if (s == "d") return SweepAxis::D;
  throw InvalidArgument("unknown sweep axis '" + std::string(s) + "' (theta|rho|beta|r|n|d)");
}

const char* to_string(SweepAxis a) noexcept {
  switch (a) {
    case SweepAxis::Theta: return "theta";
    case SweepAxis::Rho: return "rho";
    case SweepAxis::Beta: return "beta";
    case SweepAxis::R: return "r";
    case SweepAxis::N: return "n";
    case SweepAxis::D: return "d";
  }
  return "?";
}

ExperimentSpec with_axis_value(ExperimentSpec spec, SweepAxis axis, double value) {
  auto as_count = [](double v) {
    if (!(v >= 1.0) || v != std::floor(v)) throw InvalidArgument("n and d grids need positive integers");
    return static_cast<std::size_t>(v);
  };
  switch (axis) {
    case SweepAxis::Theta: spec.theta = value; break;
    case SweepAxis::Rho: spec.params.rho = value; break;
    case SweepAxis::Beta: spec.test_beta = value; break;
    case SweepAxis::R: spec.r = value; break;
    case SweepAxis::N: spec.params.n = as_count(value); break;
    case SweepAxis::D: spec.params.d = as_count(value); break;
  }
  // The injected P belongs to one (d, rho, theta) point only.
  if (axis == SweepAxis::Theta || axis == SweepAxis::Rho || axis == SweepAxis::D) spec.p_ref.reset();
  return spec;
}

const std::string& experiment_csv_header() {
  static const std::string h =
      "n,d,rho,theta,beta,gamma,r,trials,seed,kind,method,"
      "p_fa,p_fa_up95,p_md,p_md_up95,pe1,pe1_up95,pe2,pe2_up95,r_bar,wall_s";
  return h;
}

void write_experiment_csv_row(std::ostream& os, const ExperimentResult& r) {
  const ExperimentSpec& s = r.spec;
  const bool det = s.kind == ExperimentKind::Detection;
  char buf[768];
  auto rate_cols = [](const RateEstimate& e, bool on, char* dst, std::size_t cap) {
    if (!on) return std::snprintf(dst, cap, ",");
    return std::snprintf(dst, cap, "%.6g,%.6g", e.rate(), e.upper95());
  };
  int len = std::snprintf(buf, sizeof buf, "%zu,%zu,%.6g,%.6g,%.6g,%.6g,%.6g,%zu,%llu,%s,%s,",
                          s.params.n, s.params.d, s.params.rho, s.theta, s.test_beta, s.gamma, s.r,
                          s.trials, static_cast<unsigned long long>(s.seed), to_string(s.kind),
                          det ? to_string(s.detector) : to_string(s.algorithm));
  const RateEstimate* est[4] = {&r.p_fa, &r.p_md, &r.pe1, &r.pe2};
  for (int i = 0; i < 4; ++i) {
    const bool on = (i < 2) == det;
    len += rate_cols(*est[i], on, buf + len, sizeof buf - len);
    len += std::snprintf(buf + len, sizeof buf - len, ",");
  }
  if (det)
    std::snprintf(buf + len, sizeof buf - len, ",%.6g", r.wall_seconds);
  else
    std::snprintf(buf + len, sizeof buf - len, "%.6g,%.6g", r.r_bar, r.wall_seconds);
  os << buf << '\n';
}

void sweep(const ExperimentSpec& spec, SweepAxis axis, std::span<const double> grid,
           std::ostream& os) {
  // Validate the whole grid before any work.
  std::vector<ExperimentSpec> points;
  points.reserve(grid.size());
  for (const double v : grid) {
    points.push_back(with_axis_value(spec, axis, v));
    points.back().validate();
  }
  os << experiment_csv_header() << '\n' << std::flush;
  for (const auto& p : points) {
    write_experiment_csv_row(os, run_experiment(p));
    os.flush();
  }
}

}  // namespace dbalign
