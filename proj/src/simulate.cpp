#include "swbin/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace swbin {

namespace {

constexpr std::uint64_t kMaxSequences = std::uint64_t(1) << 26;

// Stream ids per trial: one for drawing (x, y), one for bin assignment.
constexpr std::uint64_t kStreamsPerTrial = 2;

std::uint64_t pow_u64(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

std::uint64_t SimConfig::bins() const {
  if (rate <= 0.0) return 1;
  double m = std::round(std::exp(double(n) * rate));
  return std::max<std::uint64_t>(2, std::uint64_t(m));
}

void SimConfig::validate() const {
  if (n < 1) throw OutOfRange("simulate: n must be >= 1");
  if (rate < 0.0) throw OutOfRange("simulate: rate must be >= 0");
  if (!(beta > 0.0)) throw OutOfRange("simulate: beta must be > 0");
  double total = std::pow(double(source.nx()), double(n));
  if (total > double(kMaxSequences))
    throw MemoryBudgetExceeded("simulate: |X|^n exceeds the 2^26 budget");
  if (metric == MetricKind::mismatched && !model)
    throw OutOfRange("simulate: mismatched metric requires a model");
}

TrialRecord run_binning_trial(const SimConfig& cfg, std::uint64_t trial_index) {
  cfg.validate();
  const JointSource& src = cfg.source;
  const std::size_t nx = src.nx();
  const int n = cfg.n;
  const std::uint64_t total = pow_u64(nx, n);
  const std::uint64_t m = cfg.bins();
  const bool word_map = std::isinf(cfg.beta);

  // Decoding metric: beta-tilted ln P (or ln P-tilde) per letter.
  std::vector<double> metric_log(nx * src.ny());
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < src.ny(); ++y) {
      double lp = kNegInf;
      switch (cfg.metric) {
        case MetricKind::mismatched: lp = cfg.model->log_p(x, y); break;
        case MetricKind::min_conditional_entropy:
        case MetricKind::matched: lp = src.log_p(x, y); break;
      }
      metric_log[x * src.ny() + y] = lp;
    }

  // Draw (x, y) i.i.d. from P.
  const std::uint64_t src_stream = kStreamsPerTrial * trial_index;
  std::vector<std::size_t> xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    double u = to_unit(counter_hash(cfg.seed, src_stream, std::uint64_t(i)));
    double acc = 0.0;
    std::size_t pick = nx * src.ny() - 1;
    for (std::size_t c = 0; c < nx * src.ny(); ++c) {
      acc += src.p_flat()[c];
      if (u < acc) {
        pick = c;
        break;
      }
    }
    xs[i] = pick / src.ny();
    ys[i] = pick % src.ny();
  }

  // Per-position letter scores against the drawn y.
  std::vector<double> score(std::size_t(n) * nx);
  for (int i = 0; i < n; ++i)
    for (std::size_t a = 0; a < nx; ++a)
      score[std::size_t(i) * nx + a] = metric_log[a * src.ny() + ys[i]];

  // The entropy metric scores a candidate by -n * empirical H(X'|Y), a
  // function of the pair type rather than a sum of letter scores.
  const bool mce = cfg.metric == MetricKind::min_conditional_entropy;
  std::vector<double> y_count(src.ny(), 0.0);
  for (int i = 0; i < n; ++i) y_count[ys[i]] += 1.0;
  std::vector<double> type_count(nx * src.ny());
  auto mce_metric = [&](const std::vector<std::size_t>& dig) {
    std::fill(type_count.begin(), type_count.end(), 0.0);
    for (int i = 0; i < n; ++i) type_count[dig[i] * src.ny() + ys[i]] += 1.0;
    double v = 0.0;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < src.ny(); ++y) {
        double c = type_count[x * src.ny() + y];
        if (c > 0.0) v += c * std::log(c / y_count[y]);
      }
    return v;
  };

  // Index of the true sequence (digits most-significant-first).
  std::uint64_t true_index = 0;
  double true_metric = 0.0;
  for (int i = 0; i < n; ++i) {
    true_index = true_index * nx + xs[i];
    true_metric += score[std::size_t(i) * nx + xs[i]];
  }
  if (mce) true_metric = mce_metric(xs);

  const std::uint64_t bin_stream = kStreamsPerTrial * trial_index + 1;
  const std::uint64_t bin_base = mix64(mix64(cfg.seed) ^ bin_stream);
  const std::uint64_t true_bin = to_bin(mix64(bin_base ^ true_index), m);

  // Stream over the bin of the true sequence in log domain.
  std::vector<LogAccumulator> post(std::size_t(n) * nx);
  LogAccumulator z_error;
  std::uint64_t occupancy = 0;
  std::uint64_t best_index = true_index;  // word-MAP argmax, lowest index wins
  double best_metric = kNegInf;
  std::vector<std::size_t> digits(n);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (to_bin(mix64(bin_base ^ idx), m) != true_bin) continue;
    ++occupancy;
    std::uint64_t rem = idx;
    double lm = 0.0;
    for (int i = n - 1; i >= 0; --i) {
      digits[i] = std::size_t(rem % nx);
      rem /= nx;
      lm += score[std::size_t(i) * nx + digits[i]];
    }
    if (mce) lm = mce_metric(digits);
    if (lm > best_metric) {
      best_metric = lm;
      best_index = idx;
    }
    if (idx != true_index && lm != kNegInf)
      z_error.add(cfg.beta == kInf ? lm : cfg.beta * lm);
    if (!word_map) {
      double w = cfg.beta * lm;
      for (int i = 0; i < n; ++i) post[std::size_t(i) * nx + digits[i]].add(w);
    }
  }

  // Word-MAP symbol decisions when beta is the limit flag.
  std::vector<std::size_t> word_digits(n);
  if (word_map) {
    std::uint64_t rem = best_index;
    for (int i = n - 1; i >= 0; --i) {
      word_digits[i] = std::size_t(rem % nx);
      rem /= nx;
    }
  }

  TrialRecord rec;
  rec.bin_occupancy = occupancy;
  rec.log_z_correct = word_map ? true_metric : cfg.beta * true_metric;
  rec.log_z_error = z_error.value();
  rec.correct_dominates = rec.log_z_correct > rec.log_z_error;
  if (!word_map)
    for (std::size_t a = 0; a < nx; ++a)
      rec.log_post_first.push_back(post[a].value());

  const int first = 0;
  const int last = cfg.average_all_positions ? n : 1;
  for (int i = first; i < last; ++i) {
    ++rec.positions;
    if (word_map) {
      if (word_digits[i] != xs[i]) rec.error_units += 2;
      continue;
    }
    double mx = kNegInf;
    for (std::size_t a = 0; a < nx; ++a)
      mx = std::max(mx, post[std::size_t(i) * nx + a].value());
    int at_max = 0;
    bool true_at_max = false;
    for (std::size_t a = 0; a < nx; ++a) {
      if (post[std::size_t(i) * nx + a].value() == mx) {
        ++at_max;
        if (a == xs[i]) true_at_max = true;
      }
    }
    if (!true_at_max)
      rec.error_units += 2;
    else if (at_max > 1)
      rec.error_units += cfg.pessimistic_ties ? 2 : 1;
  }
  return rec;
}

std::pair<double, double> wilson_interval(double k, double n) {
  if (n <= 0.0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 95%
  double phat = k / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = phat + z2 / (2.0 * n);
  double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, (center - half) / denom),
          std::min(1.0, (center + half) / denom)};
}

SimReport estimate_ber(const SimConfig& cfg) {
  cfg.validate();
  if (cfg.trials < 1) throw OutOfRange("simulate: trials must be >= 1");
  SimReport rep;
  rep.trials = cfg.trials;
  rep.n = cfg.n;
  rep.rate = cfg.rate;
  rep.beta = cfg.beta;
  rep.bins = cfg.bins();
  rep.seed = cfg.seed;

  KahanSum zc, ze;
  std::uint64_t ze_zero = 0, dominated = 0;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    TrialRecord rec = run_binning_trial(cfg, t);
    rep.error_units += rec.error_units;
    rep.positions_scored += rec.positions;
    zc.add(rec.log_z_correct);
    if (rec.log_z_error == kNegInf)
      ++ze_zero;
    else
      ze.add(rec.log_z_error);
    if (rec.correct_dominates) ++dominated;
  }
  double denom = double(rep.positions_scored);
  double k = double(rep.error_units) / 2.0;
  rep.ber = k / denom;
  std::tie(rep.ci_low, rep.ci_high) = wilson_interval(k, denom);
  rep.mean_log_zc_per_n = zc.sum / (double(cfg.trials) * cfg.n);
  std::uint64_t ze_finite = cfg.trials - ze_zero;
  rep.mean_log_ze_per_n =
      ze_finite ? ze.sum / (double(ze_finite) * cfg.n) : kNegInf;
  rep.fraction_ze_zero = double(ze_zero) / double(cfg.trials);
  rep.dominance_fraction = double(dominated) / double(cfg.trials);
  return rep;
}

std::vector<DominanceCell> dominance_map(
    const SimConfig& base, const std::vector<double>& rates,
    const std::vector<double>& temperatures) {
  std::vector<DominanceCell> cells;
  std::uint64_t cell_index = 0;
  for (double r : rates)
    for (double t : temperatures) {
      SimConfig cfg = base;
      cfg.rate = r;
      cfg.beta = 1.0 / t;
      // Decorrelate cells while keeping the map reproducible.
      cfg.seed = mix64(base.seed ^ (0x9e3779b9ULL + cell_index++));
      SimReport rep = estimate_ber(cfg);
      cells.push_back({r, t, rep.dominance_fraction});
    }
  return cells;
}

DilutionReport rdm_dilution_experiment(const JointSource& src, int n, double r,
                                       const std::vector<double>& betas,
                                       int realizations, std::uint64_t seed) {
  if (n < 1) throw OutOfRange("dilution: n must be >= 1");
  if (r < 0.0) throw OutOfRange("dilution: rate must be >= 0");
  if (realizations < 1) throw OutOfRange("dilution: realizations must be >= 1");
  const std::size_t nx = src.nx();
  double total_d = std::pow(double(nx), double(n));
  if (total_d > double(kMaxSequences))
    throw MemoryBudgetExceeded("dilution: |X|^n exceeds the 2^26 budget");
  const std::uint64_t total = pow_u64(nx, n);

  // Deterministic y of (approximately) the typical composition: counts
  // round n P(y), largest-remainder corrected, letters blocked together.
  std::vector<int> y_counts(src.ny(), 0);
  int assigned = 0;
  for (std::size_t y = 0; y < src.ny(); ++y) {
    y_counts[y] = int(std::floor(double(n) * src.p_y(y)));
    assigned += y_counts[y];
  }
  while (assigned < n) {
    std::size_t best = 0;
    double best_gap = kNegInf;
    for (std::size_t y = 0; y < src.ny(); ++y) {
      double gap = double(n) * src.p_y(y) - y_counts[y];
      if (gap > best_gap) {
        best_gap = gap;
        best = y;
      }
    }
    ++y_counts[best];
    ++assigned;
  }
  std::vector<std::size_t> ys;
  for (std::size_t y = 0; y < src.ny(); ++y)
    ys.insert(ys.end(), std::size_t(y_counts[y]), y);

  const double keep = std::exp(-double(n) * r);
  TiltedSpectrum spec(src, SpectrumKind::conditional_x_given_y);

  std::vector<KahanSum> measured(betas.size());
  KahanSum survivors_sum;
  std::vector<std::size_t> digits(n);
  std::vector<double> energies;
  for (int rep_i = 0; rep_i < realizations; ++rep_i) {
    energies.clear();
    const std::uint64_t stream = std::uint64_t(rep_i);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      if (to_unit(counter_hash(seed, stream, idx)) >= keep) continue;
      std::uint64_t rem = idx;
      double e = 0.0;
      for (int i = n - 1; i >= 0; --i) {
        std::size_t d = std::size_t(rem % nx);
        rem /= nx;
        double lp = src.log_p(d, ys[i]);
        if (lp == kNegInf) {
          e = kInf;
          break;
        }
        e -= lp;
      }
      if (e != kInf) energies.push_back(e);
    }
    if (energies.empty())
      throw EmptyDilution("dilution: no microstate survived");
    survivors_sum.add(double(energies.size()));
    for (std::size_t b = 0; b < betas.size(); ++b) {
      LogAccumulator acc;
      for (double e : energies) acc.add(-betas[b] * e);
      measured[b].add(acc.value() / double(n));
    }
  }
  DilutionReport rep;
  rep.rate = r;
  rep.n = n;
  rep.realizations = realizations;
  rep.seed = seed;
  rep.beta_c_analytic = spec.beta_c(r);
  rep.points.resize(betas.size());
  for (std::size_t b = 0; b < betas.size(); ++b) {
    rep.points[b].beta = betas[b];
    rep.points[b].analytic = spec.phi_diluted(betas[b], r);
    rep.points[b].measured = measured[b].sum / double(realizations);
  }
  rep.mean_survivors = survivors_sum.sum / double(realizations);

  // Knee estimate: the freezing point is where the measured curve departs
  // from the paramagnetic branch phi(beta) - r by more than the finite-size
  // resolution.  The two branches of the diluted free energy are tangent at
  // beta_c, so a two-line fit has no kink to lock onto; instead we threshold
  // the departure at 1/n, the scale of the sub-exponential (prefactor)
  // corrections the measurement cannot resolve, and interpolate the crossing.
  const std::size_t nb = betas.size();
  const double tau = 1.0 / double(n);
  double knee = betas.empty() ? 0.0 : betas.back();
  double prev_d = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    double d = (spec.phi(betas[i]) - r) - rep.points[i].measured;
    if (d >= tau) {
      if (i == 0)
        knee = betas[0];
      else
        knee = betas[i - 1] +
               (tau - prev_d) / (d - prev_d) * (betas[i] - betas[i - 1]);
      break;
    }
    prev_d = d;
  }
  rep.beta_c_estimate = knee;
  return rep;
}

}  // namespace swbin
