#include "swbin/exponent.hpp"

#include <algorithm>
#include <cmath>

namespace swbin {

namespace {

constexpr double kZeroTol = 1e-12;
constexpr double kAlphaReconstructCap = 500.0;

double binomial_count(std::size_t n, std::size_t k) {
  return std::exp(std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
                  std::lgamma(double(n - k) + 1.0));
}

}  // namespace

const char* exponent_phase_name(ExponentPhase p) {
  switch (p) {
    case ExponentPhase::zero: return "zero";
    case ExponentPhase::ferro_beta_ge_1: return "ferro_beta_ge_1";
    case ExponentPhase::ferro_beta_lt_1: return "ferro_beta_lt_1";
    case ExponentPhase::positive: return "positive";
  }
  return "?";
}

ExponentSolver::ExponentSolver(const JointSource& src, MetricKind metric,
                               std::optional<MismatchModel> model)
    : src_(src), metric_(metric), model_(std::move(model)) {
  if (metric_ == MetricKind::mismatched && !model_)
    throw OutOfRange("exponent: mismatched metric requires a model");
  for (std::size_t x = 0; x < src_.nx(); ++x)
    for (std::size_t y = 0; y < src_.ny(); ++y) {
      if (src_.p(x, y) <= 0.0) continue;
      cells_.push_back(x * src_.ny() + y);
      cell_p_.push_back(src_.p(x, y));
      cell_log_p_.push_back(src_.log_p(x, y));
      cell_log_m_.push_back(metric_ == MetricKind::mismatched
                                ? model_->log_p(x, y)
                                : src_.log_p(x, y));
    }
  p_as_q_ = cell_p_;
}

std::vector<double> ExponentSolver::y_marginal(
    const std::vector<double>& q) const {
  std::vector<double> w(src_.ny(), 0.0);
  for (std::size_t i = 0; i < cells_.size(); ++i)
    w[cells_[i] % src_.ny()] += q[i];
  return w;
}

double ExponentSolver::metric_rate(const std::vector<double>& q) const {
  double l = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    if (cell_log_m_[i] == kNegInf) return kNegInf;
    l += q[i] * cell_log_m_[i];
  }
  return l;
}

double ExponentSolver::cond_entropy(const std::vector<double>& q) const {
  std::vector<double> w = y_marginal(q);
  double h = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] <= 0.0) continue;
    h -= q[i] * std::log(q[i] / w[cells_[i] % src_.ny()]);
  }
  return h;
}

TiltedSpectrum ExponentSolver::weighted_spectrum(
    const std::vector<double>& w) const {
  std::vector<TiltedSpectrum::Group> groups;
  for (std::size_t y = 0; y < src_.ny(); ++y) {
    if (w[y] <= 0.0) continue;
    TiltedSpectrum::Group g;
    g.weight = w[y];
    for (std::size_t x = 0; x < src_.nx(); ++x) {
      double lm = metric_ == MetricKind::mismatched ? model_->log_p(x, y)
                                                    : src_.log_p(x, y);
      if (lm != kNegInf) g.energies.push_back(-lm);
    }
    if (g.energies.empty())
      throw DegenerateRow("inner exponent: empty metric column");
    groups.push_back(std::move(g));
  }
  return TiltedSpectrum(std::move(groups), SpectrumKind::conditional_x_given_y);
}

ExponentSolver::InnerSolve ExponentSolver::solve_inner(
    const TiltedSpectrum& spec, double t, double beta, double rate) const {
  InnerSolve out{0.0, 0.0, beta};
  // r0: best attainable threshold among competitors with entropy >= rate.
  if (spec.entropy_max() < rate) {
    out.r0 = kNegInf;
  } else if (spec.degenerate() || spec.entropy_of_alpha(beta) >= rate) {
    out.r0 = spec.phi(beta) - rate;
    out.alpha = beta;
  } else {
    out.r0 = -beta * spec.s_inverse(rate);
    out.alpha = std::min(spec.beta_c(rate), kAlphaReconstructCap);
  }
  if (t <= out.r0) return out;

  // Past r0 every feasible competitor has entropy < rate and must satisfy
  // -beta * eps' >= t on its own.
  double cap = -t / beta;
  if (cap < spec.eps_min() - 1e-12) {
    out.value = kInf;
    return out;
  }
  double eps_peak = spec.degenerate() ? spec.eps_min() : spec.epsilon_of_alpha(0.0);
  double eps_star = std::clamp(cap, spec.eps_min(), eps_peak);
  out.value = std::max(0.0, rate - spec.s_at(eps_star));
  if (spec.degenerate() || eps_star >= eps_peak)
    out.alpha = 0.0;
  else if (eps_star <= spec.eps_min() + 1e-12)
    out.alpha = kAlphaReconstructCap;
  else
    out.alpha = spec.alpha_of_epsilon(eps_star);
  return out;
}

ExponentSolver::InnerSolve ExponentSolver::solve_inner_word(
    const TiltedSpectrum& spec, double eps_q, double rate) const {
  InnerSolve out{0.0, kNegInf, 0.0};
  double eps_peak = spec.degenerate() ? spec.eps_min() : spec.epsilon_of_alpha(0.0);
  double eps_star = std::clamp(eps_q, spec.eps_min(), eps_peak);
  out.value = std::max(0.0, rate - spec.s_at(eps_star));
  if (spec.degenerate() || eps_star >= eps_peak)
    out.alpha = 0.0;
  else if (eps_star <= spec.eps_min() + 1e-12)
    out.alpha = kAlphaReconstructCap;
  else
    out.alpha = spec.alpha_of_epsilon(eps_star);
  return out;
}

double ExponentSolver::objective(const std::vector<double>& q, double rate,
                                 double beta) const {
  double div = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > 0.0) div += q[i] * std::log(q[i] / cell_p_[i]);
  div = std::max(0.0, div);

  double a;
  if (metric_ == MetricKind::min_conditional_entropy) {
    double h = cond_entropy(q);
    if (std::isinf(beta)) {
      a = std::max(0.0, rate - h);
    } else {
      double t = -beta * h;
      double r0 = beta >= 1.0
                      ? -beta * rate
                      : (1.0 - beta) * std::log(double(src_.nx())) - rate;
      a = t <= r0 ? 0.0 : rate - h;
    }
  } else {
    double l = metric_rate(q);
    TiltedSpectrum spec = weighted_spectrum(y_marginal(q));
    if (std::isinf(beta))
      a = solve_inner_word(spec, l == kNegInf ? kInf : -l, rate).value;
    else
      a = solve_inner(spec, l == kNegInf ? kNegInf : beta * l, beta, rate)
              .value;
  }
  if (a == kInf) return kInf;
  return div + a;
}

double ExponentSolver::a_term(const JointType& q_xy, double rate,
                              double beta) const {
  q_xy.validate();
  if (q_xy.nx != src_.nx() || q_xy.ny != src_.ny())
    throw OutOfRange("a_term: type shape mismatch");
  if (!(beta > 0.0)) throw OutOfRange("a_term: beta must be > 0");
  if (rate < 0.0) throw OutOfRange("a_term: rate must be >= 0");
  if (metric_ == MetricKind::min_conditional_entropy) {
    double h = q_xy.entropy_x_given_y();
    if (std::isinf(beta)) return std::max(0.0, rate - h);
    double t = -beta * h;
    double r0 = beta >= 1.0
                    ? -beta * rate
                    : (1.0 - beta) * std::log(double(src_.nx())) - rate;
    return t <= r0 ? 0.0 : rate - h;
  }
  double l = 0.0;
  for (std::size_t x = 0; x < src_.nx() && l != kNegInf; ++x)
    for (std::size_t y = 0; y < src_.ny(); ++y) {
      double v = q_xy(x, y);
      if (v <= 0.0) continue;
      double lm = metric_ == MetricKind::mismatched ? model_->log_p(x, y)
                                                    : src_.log_p(x, y);
      if (lm == kNegInf) {
        l = kNegInf;
        break;
      }
      l += v * lm;
    }
  TiltedSpectrum spec = weighted_spectrum(q_xy.marginal_y());
  if (std::isinf(beta))
    return solve_inner_word(spec, l == kNegInf ? kInf : -l, rate).value;
  return solve_inner(spec, l == kNegInf ? kNegInf : beta * l, beta, rate).value;
}

JointType ExponentSolver::to_joint_type(const std::vector<double>& q) const {
  JointType jt;
  jt.nx = src_.nx();
  jt.ny = src_.ny();
  jt.q.assign(jt.nx * jt.ny, 0.0);
  for (std::size_t i = 0; i < cells_.size(); ++i) jt.q[cells_[i]] = q[i];
  return jt;
}

ConditionalType ExponentSolver::competitor_from_alpha(
    const std::vector<double>& w, double alpha) const {
  ConditionalType ct;
  ct.nx = src_.nx();
  ct.ny = src_.ny();
  ct.q.assign(ct.nx * ct.ny, 0.0);
  for (std::size_t y = 0; y < src_.ny(); ++y) {
    std::vector<double> lq(src_.nx(), kNegInf);
    for (std::size_t x = 0; x < src_.nx(); ++x) {
      double lm = metric_ == MetricKind::mismatched ? model_->log_p(x, y)
                                                    : src_.log_p(x, y);
      // Columns with zero Q_Y weight are filled with the same tilt so the
      // result is a valid conditional everywhere.
      if (lm != kNegInf) lq[x] = alpha * lm;
    }
    double z = log_sum_exp(lq);
    if (z == kNegInf) {
      ct.at(0, y) = 1.0;
      continue;
    }
    for (std::size_t x = 0; x < src_.nx(); ++x)
      if (lq[x] != kNegInf) ct.at(x, y) = std::exp(lq[x] - z);
  }
  (void)w;
  return ct;
}

ExponentResult ExponentSolver::exponent(double rate, double beta) const {
  if (rate < 0.0) throw OutOfRange("exponent: rate must be >= 0");
  if (!(beta > 0.0)) throw OutOfRange("exponent: beta must be > 0");

  const std::size_t k = cells_.size();
  // Coarse simplex grid: target step 0.02, throttled so the cell count
  // stays within budget for larger supports.
  std::size_t m = 50;
  while (m > 2 && binomial_count(m + k - 1, k - 1) > 250000.0)
    m = std::max<std::size_t>(2, (m * 4) / 5);

  struct Candidate {
    double obj;
    std::vector<double> q;
  };
  std::vector<Candidate> best;
  const std::size_t keep = 12;
  auto consider = [&](double obj, const std::vector<double>& q) {
    if (best.size() == keep && obj >= best.back().obj) return;
    auto it = std::lower_bound(
        best.begin(), best.end(), obj,
        [](const Candidate& c, double v) { return c.obj < v; });
    best.insert(it, Candidate{obj, q});
    if (best.size() > keep) best.pop_back();
  };

  std::vector<double> q(k, 0.0);
  std::vector<std::size_t> counts(k, 0);
  auto enumerate = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
    if (idx + 1 == k) {
      counts[idx] = left;
      for (std::size_t i = 0; i < k; ++i) q[i] = double(counts[i]) / double(m);
      consider(objective(q, rate, beta), q);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[idx] = c;
      self(self, idx + 1, left - c);
    }
  };
  enumerate(enumerate, 0, m);
  consider(objective(p_as_q_, rate, beta), p_as_q_);

  // Pairwise mass-transfer descent with a shrinking step; keeps iterates
  // exactly on the simplex and handles the positive-part kinks.
  double step0 = 1.0 / double(m);
  for (auto& cand : best) {
    for (int round = 0; round < 4; ++round) {
      double delta = step0 / std::pow(10.0, round + 1);
      bool improved = true;
      int guard = 0;
      while (improved && guard++ < 200) {
        improved = false;
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) {
            if (i == j || cand.q[j] < delta) continue;
            cand.q[i] += delta;
            cand.q[j] -= delta;
            double obj = objective(cand.q, rate, beta);
            if (obj < cand.obj - 1e-15) {
              cand.obj = obj;
              improved = true;
            } else {
              cand.q[i] -= delta;
              cand.q[j] += delta;
            }
          }
      }
    }
  }

  const Candidate* winner = &best.front();
  for (const auto& c : best)
    if (c.obj < winner->obj) winner = &c;

  ExponentResult res;
  res.value = std::max(0.0, winner->obj);
  res.feasible = res.value != kInf;
  res.minimizing_q_xy = to_joint_type(winner->q);

  // Reconstruct the competitor achieving the inner minimum at the winner.
  if (metric_ == MetricKind::min_conditional_entropy) {
    // The winner's own conditional always attains the entropy-metric inner
    // minimum (zero when feasible at entropy >= rate, rate - H otherwise).
    ConditionalType ct;
    ct.nx = src_.nx();
    ct.ny = src_.ny();
    ct.q.assign(ct.nx * ct.ny, 0.0);
    std::vector<double> w = y_marginal(winner->q);
    for (std::size_t y = 0; y < ct.ny; ++y) {
      if (w[y] <= 0.0) {
        for (std::size_t x = 0; x < ct.nx; ++x)
          ct.at(x, y) = 1.0 / double(ct.nx);
        continue;
      }
      for (std::size_t x = 0; x < ct.nx; ++x)
        ct.at(x, y) = res.minimizing_q_xy(x, y) / w[y];
    }
    res.minimizing_q_xprime = std::move(ct);
  } else {
    std::vector<double> w = y_marginal(winner->q);
    TiltedSpectrum spec = weighted_spectrum(w);
    double l = metric_rate(winner->q);
    InnerSolve inner =
        std::isinf(beta)
            ? solve_inner_word(spec, l == kNegInf ? kInf : -l, rate)
            : solve_inner(spec, l == kNegInf ? kNegInf : beta * l, beta, rate);
    res.minimizing_q_xprime = competitor_from_alpha(w, inner.alpha);
  }

  if (res.value <= kZeroTol) {
    res.phase = ExponentPhase::zero;
  } else if (metric_ == MetricKind::min_conditional_entropy) {
    res.phase = ExponentPhase::positive;
  } else {
    res.phase = (std::isinf(beta) || beta >= 1.0)
                    ? ExponentPhase::ferro_beta_ge_1
                    : ExponentPhase::ferro_beta_lt_1;
  }
  return res;
}

double ExponentSolver::exponent_word(double rate) const {
  return exponent(rate, kInf).value;
}

InnerExponent ExponentSolver::inner_e1(double t, double beta, double rate,
                                       const std::vector<double>& q_y) const {
  if (q_y.size() != src_.ny())
    throw OutOfRange("inner_e1: marginal size mismatch");
  double sum = 0.0;
  for (double v : q_y) {
    if (v < -1e-12) throw InvalidDistribution("inner_e1: negative weight");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw InvalidDistribution("inner_e1: marginal must sum to 1");
  if (!(beta > 0.0) || std::isinf(beta))
    throw OutOfRange("inner_e1: beta must be finite and > 0");
  if (metric_ == MetricKind::min_conditional_entropy) {
    double r0 = beta >= 1.0
                    ? -beta * rate
                    : (1.0 - beta) * std::log(double(src_.nx())) - rate;
    InnerExponent out;
    out.t = t;
    out.r0 = r0;
    out.value = t <= r0 ? 0.0 : std::max(0.0, rate + t / beta);
    return out;
  }
  TiltedSpectrum spec = weighted_spectrum(q_y);
  InnerSolve s = solve_inner(spec, t, beta, rate);
  InnerExponent out;
  out.t = t;
  out.value = s.value;
  out.r0 = s.r0;
  return out;
}

ExponentPhase ExponentSolver::exponent_phase(double rate, double beta) const {
  if (rate < 0.0) throw OutOfRange("exponent_phase: rate must be >= 0");
  if (!(beta > 0.0)) throw OutOfRange("exponent_phase: beta must be > 0");
  double at_p = objective(p_as_q_, rate, std::isinf(beta) ? kInf : beta);
  if (at_p <= kZeroTol) return ExponentPhase::zero;
  if (metric_ == MetricKind::min_conditional_entropy)
    return ExponentPhase::positive;
  return (std::isinf(beta) || beta >= 1.0) ? ExponentPhase::ferro_beta_ge_1
                                           : ExponentPhase::ferro_beta_lt_1;
}

double a_term(const JointSource& src, const JointType& q_xy, double rate,
              double beta, MetricKind metric,
              std::optional<MismatchModel> model) {
  return ExponentSolver(src, metric, std::move(model)).a_term(q_xy, rate, beta);
}

ExponentResult exponent(const JointSource& src, double rate, double beta,
                        MetricKind metric, std::optional<MismatchModel> model) {
  return ExponentSolver(src, metric, std::move(model)).exponent(rate, beta);
}

double exponent_word(const JointSource& src, double rate) {
  return ExponentSolver(src, MetricKind::matched).exponent_word(rate);
}

InnerExponent inner_e1(const JointSource& src, double t, double beta,
                       double rate, const std::vector<double>& q_y,
                       MetricKind metric, std::optional<MismatchModel> model) {
  return ExponentSolver(src, metric, std::move(model))
      .inner_e1(t, beta, rate, q_y);
}

ExponentPhase exponent_phase(const JointSource& src, double rate, double beta) {
  return ExponentSolver(src, MetricKind::matched).exponent_phase(rate, beta);
}

}  // namespace swbin
