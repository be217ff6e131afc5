#pragma once

// Seeded Monte Carlo engine. Trial t of an experiment draws from the stream
// stream_seed(seed, t), so results do not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dbalign/model.hpp"

namespace dbalign {

enum class ExperimentKind { Detection, Recovery };
enum class Detector { Count, Sop };
enum class Algorithm { TC, ML, MP, TwoStage };

const char* to_string(ExperimentKind k) noexcept;
const char* to_string(Detector d) noexcept;
const char* to_string(Algorithm a) noexcept;
/// Accepts "tc", "ml", "mp", "two-stage". Throws InvalidArgument otherwise.
Algorithm parse_algorithm(std::string_view s);
Detector parse_detector(std::string_view s);

struct ExperimentSpec {
  ModelParams params;  ///< sigma is ignored; experiments use identity
  ExperimentKind kind = ExperimentKind::Recovery;
  Detector detector = Detector::Count;
  Algorithm algorithm = Algorithm::TC;
  double theta = 0.5;
  double test_beta = 0.5;
  double gamma = 0.0;  ///< sum-of-inner-products test only
  double r = 0.3;      ///< Maximum-Path fraction
  /// Count test threshold P; p_prob(d, rho, theta) when empty.
  std::optional<double> p_ref;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  /// Worker threads; 0 picks default_thread_count().
  unsigned threads = 0;

  void validate() const;
};

/// events / trials with a one-sided 95% Clopper-Pearson upper limit.
struct RateEstimate {
  std::size_t events = 0;
  std::size_t trials = 0;

  double rate() const noexcept;
  double std_error() const noexcept;
  double upper95() const;
};

/// Smallest p with Pr{Binomial(trials, p) <= events} <= 0.05.
double clopper_pearson_upper(std::size_t events, std::size_t trials, double confidence = 0.95);

struct ExperimentResult {
  ExperimentSpec spec;
  RateEstimate p_fa;   ///< detection
  RateEstimate p_md;   ///< detection
  RateEstimate pe1;    ///< recovery
  RateEstimate pe2;    ///< recovery
  double r_bar = 0.0;  ///< mean output size / n; for two-stage, step I size / n
  double wall_seconds = 0.0;
};

/// DBALIGN_THREADS if set and positive, else hardware_concurrency (>= 1).
unsigned default_thread_count();

ExperimentResult estimate_detection(const ExperimentSpec& spec);
ExperimentResult estimate_recovery(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// One recovery algorithm with its own parameters.
struct AlgorithmConfig {
  Algorithm algorithm = Algorithm::ML;
  double theta = 0.5;
  double r = 0.3;
};

/// Several algorithms on the same draws (common random numbers). The
/// Hungarian solution is computed once per trial and shared by ML and MP.
/// spec.algorithm / theta / r are ignored.
std::vector<ExperimentResult> estimate_recovery(const ExperimentSpec& spec,
                                                std::span<const AlgorithmConfig> algorithms);

/// Direct-construction estimate of the local probabilities: per trial, one
/// independent pair (X, Y) and one matched pair (X, rho X + sqrt(1-rho^2) Z).
/// Counts cosines >= theta for every theta in the list.
struct LocalRateEstimate {
  std::vector<double> thetas;
  std::vector<RateEstimate> q;
  std::vector<RateEstimate> p;
};
LocalRateEstimate estimate_local_rates(std::size_t d, double rho, std::span<const double> thetas,
                                       std::size_t trials, std::uint64_t seed,
                                       unsigned threads = 0);

enum class SweepAxis { Theta, Rho, Beta, R, N, D };
/// "theta", "rho", "beta", "r", "n", "d". Throws InvalidArgument otherwise.
SweepAxis parse_sweep_axis(std::string_view s);
const char* to_string(SweepAxis a) noexcept;
ExperimentSpec with_axis_value(ExperimentSpec spec, SweepAxis axis, double value);

const std::string& experiment_csv_header();
void write_experiment_csv_row(std::ostream& os, const ExperimentResult& r);

/// One row per grid value, written and flushed as each point finishes.
void sweep(const ExperimentSpec& spec, SweepAxis axis, std::span<const double> grid,
           std::ostream& os);

}  // namespace dbalign
