#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swbin/exponent.hpp"
#include "swbin/rng.hpp"
#include "swbin/source.hpp"
#include "swbin/spectrum.hpp"

namespace swbin {

// One binning/decoding experiment configuration. beta = kInf selects the
// word-MAP limit (decisions read off the in-bin likelihood argmax).
struct SimConfig {
  explicit SimConfig(JointSource src) : source(std::move(src)) {}

  JointSource source;
  int n = 8;
  double rate = 0.5;
  double beta = 1.0;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0x5eedb15eedULL;
  MetricKind metric = MetricKind::matched;
  std::optional<MismatchModel> model;
  bool average_all_positions = false;
  // Posterior ties at the true symbol count as half an error by default;
  // pessimistic mode counts them as full errors.
  bool pessimistic_ties = false;

  // Bin count: 1 at rate 0, otherwise round(e^{nR}) clamped to >= 2.
  std::uint64_t bins() const;
  // Rejects |X|^n beyond the enumeration budget (2^26 sequences).
  void validate() const;
};

struct TrialRecord {
  std::uint64_t error_units = 0;  // half-errors, 2 per wrong symbol
  std::uint64_t positions = 0;    // symbols scored
  double log_z_correct = 0.0;     // ln Z_c (un-normalized by n)
  double log_z_error = 0.0;       // ln Z_e; -inf for a singleton bin
  bool correct_dominates = false;
  std::uint64_t bin_occupancy = 0;
  // Log posterior mass per symbol value at the first position (empty for
  // the word-MAP limit).
  std::vector<double> log_post_first;
};

struct SimReport {
  double ber = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 0.0;
  double mean_log_zc_per_n = 0.0;
  double mean_log_ze_per_n = 0.0;  // over trials with Z_e > 0
  double fraction_ze_zero = 0.0;
  double dominance_fraction = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t positions_scored = 0;
  std::uint64_t error_units = 0;
  int n = 0;
  double rate = 0.0;
  double beta = 0.0;
  std::uint64_t bins = 0;
  std::uint64_t seed = 0;
};

struct DominanceCell {
  double rate = 0.0;
  double temperature = 0.0;
  double fraction = 0.0;
};

struct DilutionPoint {
  double beta = 0.0;
  double measured = 0.0;  // mean (1/n) ln Z_D over realizations
  double analytic = 0.0;  // phi_D(beta)
};

struct DilutionReport {
  std::vector<DilutionPoint> points;
  double rate = 0.0;
  int n = 0;
  int realizations = 0;
  double beta_c_analytic = 0.0;
  double beta_c_estimate = 0.0;  // knee of the measured free energy
  double mean_survivors = 0.0;
  std::uint64_t seed = 0;
};

// One full trial: draw (x, y), bin every sequence, decode every position.
TrialRecord run_binning_trial(const SimConfig& cfg, std::uint64_t trial_index);

// Monte Carlo BER with a Wilson 95% interval; deterministic given the seed
// and independent of any work partitioning.
SimReport estimate_ber(const SimConfig& cfg);

// Fraction of trials with Z_c > Z_e on an (R, T) grid.
std::vector<DominanceCell> dominance_map(const SimConfig& base,
                                         const std::vector<double>& rates,
                                         const std::vector<double>& temperatures);

// Random dilution of the conditional system at rate r: survivors keep
// their Boltzmann weight, measured free energy is compared to phi_D.
DilutionReport rdm_dilution_experiment(const JointSource& src, int n, double r,
                                       const std::vector<double>& betas,
                                       int realizations, std::uint64_t seed);

// Wilson 95% confidence interval for k successes in n trials.
std::pair<double, double> wilson_interval(double k, double n);

}  // namespace swbin
