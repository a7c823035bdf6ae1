#pragma once

// Seeded Monte Carlo harness. Trial t at size n samples with Seed{master, t},
// so every statistic is a pure function of the configuration. Trials run on a
// worker pool; per-trial records are stored by index and reduced in index
// order with exact integer sums.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rsc/homology.hpp"
#include "rsc/phase.hpp"
#include "rsc/sampler.hpp"

namespace rsc {

enum class ExperimentKind { Faces, Domination, Dimension, Connectivity, ProbeA, ProbeB };

ExperimentKind parse_experiment_kind(std::string_view name);
std::string_view experiment_kind_name(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Faces;
  std::optional<ExponentVector> alpha;  // p_i = n^-alpha_i
  std::optional<ProbabilityVector> p;   // fixed p for every n (alternative to alpha)
  std::vector<int> n_list;
  int trials = 1;
  std::uint64_t seed = 0;
  Coefficients coefficients = Coefficients::rationals();
  bool allow_boundary = false;
  unsigned threads = 0;  // 0: hardware concurrency

  double frequency_threshold = 0.9;  // a.a.s. claims rendered at fixed n
  double slope_tolerance = 0.15;     // |fitted - predicted| growth exponent
  double face_sigma = 4.0;           // E(f_l) agreement in standard errors
  SnfBudget snf_budget;

  int r() const;
  ProbabilityVector probabilities(int n) const;
  /// Throws InvalidConfig / BoundaryAlpha on a bad configuration.
  void validate() const;
  /// Everything that determines the results (thread count excluded).
  nlohmann::json to_json() const;
};

struct TrialRecord {
  FVector f;
  std::vector<std::int64_t> betti;    // unreduced, length r+1
  std::vector<std::int64_t> reduced;  // b_0 - 1 in degree 0 (0 for the empty complex)
  int dimension = -1;
  bool connected = false;  // b_0 == 1
  std::optional<bool> probe_success;
  bool snf_fallback = false;
};

struct MomentStats {
  double mean = 0.0;
  double se = 0.0;  // sample standard deviation / sqrt(trials)
};

struct NStats {
  int n = 0;
  int trials = 0;
  std::vector<double> p;
  std::vector<MomentStats> f;
  std::vector<MomentStats> betti;
  std::vector<MomentStats> reduced;
  std::vector<double> expected_f;
  std::map<int, std::int64_t> dimension_histogram;
  double connected_frequency = 0.0;
  std::optional<double> probe_success_frequency;
  std::int64_t snf_fallbacks = 0;
};

struct TrialStats {
  std::vector<NStats> per_n;
};

/// All trial records for one n, indexed by trial.
std::vector<TrialRecord> run_trials(const ExperimentConfig& config, int n);

/// Mean and standard error per component; exact and independent of order.
NStats aggregate(int n, std::span<const TrialRecord> records, const ProbabilityVector& p);

TrialStats run_monte_carlo(const ExperimentConfig& config);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double half_width = 0.0;  // 95% confidence half-width of the slope; NaN with < 3 points
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct ExperimentReport {
  std::string name;
  nlohmann::json summary;  // {config, per_n, slope, slope_ci, pass, ...}
  std::string csv;
  bool pass = false;
};

ExperimentReport faces_report(const ExperimentConfig& config);
ExperimentReport domination_report(const ExperimentConfig& config);
ExperimentReport dimension_report(const ExperimentConfig& config);
ExperimentReport connectivity_report(const ExperimentConfig& config);
ExperimentReport probe_report(const ExperimentConfig& config);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Writes <name>.csv and <name>.json into `directory` (created if needed).
void write_report(const ExperimentReport& report, const std::string& directory);

}  // namespace rsc
