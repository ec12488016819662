#include "swbin/phase.hpp"

#include <cmath>

namespace swbin {

namespace {
constexpr double kBoundaryTol = 1e-9;
}

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::ferromagnetic: return "ferromagnetic";
    case Phase::glassy: return "glassy";
    case Phase::paramagnetic: return "paramagnetic";
  }
  return "?";
}

const char* dominant_term_name(DominantTerm t) {
  switch (t) {
    case DominantTerm::cc: return "cc";
    case DominantTerm::ec: return "ec";
    case DominantTerm::ce: return "ce";
    case DominantTerm::ee: return "ee";
  }
  return "?";
}

PhaseDiagram::PhaseDiagram(const JointSource& src)
    : src_(src), spectra_(two_sided_spectra(src)) {}

PhaseDiagram::PhaseDiagram(const JointSource& src, const MismatchModel& mismatch)
    : src_(src), spectra_(two_sided_spectra(src)), mismatch_(mismatch) {
  JointSource tilde = mismatch.as_source(src);
  spectrum_tilde_.emplace(tilde, SpectrumKind::conditional_x_given_y);
  eps_c_tilde_ = mismatch.cross_entropy_joint(src);
  rate_fg_tilde_ = mismatch.cross_entropy_x_given_y(src);
}

double PhaseDiagram::gamma(double beta) const {
  if (beta < 0.0) throw OutOfRange("gamma: beta must be >= 0");
  return beta * src_.joint_entropy() + spectra_.x_given_y.phi(beta);
}

double PhaseDiagram::gamma_inverse(double r) const {
  // Gamma is strictly decreasing on [0, 1] (eps(beta) > H(X,Y) there),
  // from phi(0) down to H(X|Y).
  double lo_val = gamma(1.0);
  double hi_val = gamma(0.0);
  if (r > hi_val + kBoundaryTol || r < lo_val - kBoundaryTol)
    throw OutOfRange("gamma_inverse: rate outside [Gamma(1), Gamma(0)]");
  if (r >= hi_val) return 0.0;
  if (r <= lo_val) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (gamma(mid) > r)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-14) break;
  }
  return 0.5 * (lo + hi);
}

double PhaseDiagram::gamma_mismatched(double beta) const {
  if (!mismatch_) throw OutOfRange("gamma_mismatched: no mismatch model");
  if (beta < 0.0) throw OutOfRange("gamma_mismatched: beta must be >= 0");
  return beta * eps_c_tilde_ + spectrum_tilde_->phi(beta);
}

double PhaseDiagram::ferro_glassy_rate(DecoderKind decoder) const {
  switch (decoder) {
    case DecoderKind::matched:
    case DecoderKind::universal:
      return src_.entropy_x_given_y();
    case DecoderKind::mismatched:
      if (!mismatch_) throw OutOfRange("classify: no mismatch model");
      return rate_fg_tilde_;
  }
  return 0.0;
}

const TiltedSpectrum& PhaseDiagram::glassy_spectrum(DecoderKind decoder) const {
  if (decoder == DecoderKind::mismatched) {
    if (!mismatch_) throw OutOfRange("classify: no mismatch model");
    return *spectrum_tilde_;
  }
  return spectra_.x_given_y;
}

PhaseLabel PhaseDiagram::classify(double rate, double temperature,
                                  DecoderKind decoder) const {
  if (!(temperature > 0.0)) throw OutOfRange("classify: temperature must be > 0");
  if (rate < 0.0) throw OutOfRange("classify: rate must be >= 0");
  double beta = 1.0 / temperature;

  // Free energy of the correct term and of the diluted competitor mass;
  // the label is whichever dominates, with ferro winning ties.
  double f_correct, f_error, beta_c;
  if (decoder == DecoderKind::universal) {
    // Empirical-conditional-entropy Hamiltonian: s(eps) = eps on
    // [0, ln|X|], so beta_c = 1 at every rate.
    double lx = std::log(static_cast<double>(src_.nx()));
    f_correct = -beta * src_.entropy_x_given_y();
    if (rate >= lx)
      f_error = kNegInf;
    else
      f_error = beta < 1.0 ? (1.0 - beta) * lx - rate : -beta * rate;
    beta_c = 1.0;
  } else {
    const TiltedSpectrum& spec = glassy_spectrum(decoder);
    double eps_c = decoder == DecoderKind::matched
                       ? src_.joint_entropy()
                       : eps_c_tilde_;
    f_correct = -beta * eps_c;
    if (spec.degenerate()) {
      f_error = rate > 0.0 ? kNegInf : -beta * spec.eps_min();
      beta_c = kInf;
    } else if (rate >= spec.entropy_max()) {
      f_error = kNegInf;
      beta_c = 0.0;
    } else {
      f_error = spec.phi_diluted(beta, rate);
      beta_c = spec.beta_c(rate);
    }
  }

  PhaseLabel out;
  if (f_correct >= f_error) {
    out.phase = Phase::ferromagnetic;
    out.on_boundary = (f_error - f_correct >= -kBoundaryTol);
    return out;
  }
  if (std::abs(f_correct - f_error) < kBoundaryTol) out.on_boundary = true;
  if (beta >= beta_c) {
    out.phase = Phase::glassy;
  } else {
    out.phase = Phase::paramagnetic;
  }
  if (beta_c > 0.0 && std::isfinite(beta_c) &&
      std::abs(temperature - 1.0 / beta_c) < kBoundaryTol)
    out.on_boundary = true;
  return out;
}

double PhaseDiagram::universal_ferro_para_temperature(double r) const {
  double lx = std::log(static_cast<double>(src_.nx()));
  double hxy = src_.entropy_x_given_y();
  if (r >= lx || r < hxy - kBoundaryTol)
    throw OutOfRange("universal_ferro_para_temperature: rate outside [H(X|Y), ln|X|)");
  return (lx - hxy) / (lx - r);
}

DominantTerm PhaseDiagram::two_sided_dominance(const TwoSidedQuery& q) const {
  if (q.beta > 1.0)
    throw BetaOutOfRange("two_sided_dominance: requires beta <= 1");
  if (!(q.beta > 0.0)) throw OutOfRange("two_sided_dominance: beta must be > 0");
  if (q.rate_x < 0.0 || q.rate_y < 0.0)
    throw OutOfRange("two_sided_dominance: rates must be >= 0");
  // Exponential growth rates of Z_cc, Z_ec, Z_ce, Z_ee; ties break in
  // that fixed order.
  double g[4] = {
      -q.beta * src_.joint_entropy(),
      spectra_.x_given_y.phi(q.beta) - q.rate_x,
      spectra_.y_given_x.phi(q.beta) - q.rate_y,
      spectra_.joint.phi(q.beta) - q.rate_x - q.rate_y,
  };
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (g[i] > g[best]) best = i;
  return static_cast<DominantTerm>(best);
}

bool PhaseDiagram::reliability_region_check(const TwoSidedQuery& q) const {
  double bh = q.beta * src_.joint_entropy();
  return q.rate_x > bh + spectra_.x_given_y.phi(q.beta) &&
         q.rate_y > bh + spectra_.y_given_x.phi(q.beta) &&
         q.rate_x + q.rate_y > bh + spectra_.joint.phi(q.beta);
}

std::vector<BoundaryPoint> PhaseDiagram::sample_boundaries(DecoderKind decoder,
                                                           int grid,
                                                           double t_max) const {
  if (grid < 2) throw OutOfRange("sample_boundaries: grid must be >= 2");
  std::vector<BoundaryPoint> pts;
  double r_fg = ferro_glassy_rate(decoder);
  double lx = std::log(static_cast<double>(src_.nx()));

  // Ferro-glassy: vertical line from T -> 0 up to the T = 1 junction.
  for (int i = 0; i < grid; ++i) {
    double t = (i + 1) * 1.0 / grid;
    pts.push_back({"ferro_glassy", r_fg, t});
  }

  // Ferro-para: parameterized by T in [1, t_max].
  for (int i = 0; i < grid; ++i) {
    double t = 1.0 + (t_max - 1.0) * i / (grid - 1);
    double beta = 1.0 / t;
    double r = 0.0;
    switch (decoder) {
      case DecoderKind::matched: r = gamma(beta); break;
      case DecoderKind::universal:
        r = (1.0 - beta) * lx + beta * src_.entropy_x_given_y();
        break;
      case DecoderKind::mismatched: r = gamma_mismatched(beta); break;
    }
    pts.push_back({"ferro_para", r, t});
  }

  // Para-glassy: T_c(R) for R in (0, r_fg] (universal: the line T = 1).
  if (decoder == DecoderKind::universal) {
    for (int i = 0; i < grid; ++i)
      pts.push_back({"para_glassy", r_fg * (i + 1) / grid, 1.0});
  } else {
    const TiltedSpectrum& spec = glassy_spectrum(decoder);
    if (!spec.degenerate()) {
      for (int i = 0; i < grid; ++i) {
        double r = r_fg * (i + 1) / grid;
        double bc = spec.beta_c(r);
        pts.push_back({"para_glassy", r, std::isfinite(bc) ? 1.0 / bc : 0.0});
      }
    }
  }
  return pts;
}

}  // namespace swbin
