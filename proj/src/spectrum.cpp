#include "swbin/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace swbin {

namespace {

constexpr double kEdgeTol = 1e-11;
constexpr double kAlphaCap = 1e12;

struct GroupStats {
  double log_zeta;  // ln zeta(alpha) = ln sum_i exp(-alpha e_i)
  double eps;       // tilted mean energy
  double h;         // tilted entropy = log_zeta + alpha * eps, stably
};

GroupStats tilted_stats(const std::vector<double>& e, double alpha) {
  // Shift by the level that dominates at this alpha so all terms are <= 1.
  double b = alpha >= 0.0 ? *std::min_element(e.begin(), e.end())
                          : *std::max_element(e.begin(), e.end());
  double s = 0.0, se = 0.0;
  for (double ei : e) {
    double t = std::exp(-alpha * (ei - b));
    s += t;
    se += t * (ei - b);
  }
  GroupStats g;
  double mean_shift = se / s;
  g.eps = b + mean_shift;
  g.log_zeta = -alpha * b + std::log(s);
  g.h = std::log(s) + alpha * mean_shift;
  return g;
}

}  // namespace

double Spectrum::beta_c(double r) const { return s_prime(s_inverse(r)); }

double Spectrum::phi_diluted(double beta, double r) const {
  double bc = beta_c(r);
  if (beta < bc) return phi(beta) - r;
  return -beta * s_inverse(r);
}

TiltedSpectrum::TiltedSpectrum(const JointSource& src, SpectrumKind kind)
    : kind_(kind) {
  auto add_conditional = [this](const JointSource& s) {
    for (std::size_t y = 0; y < s.ny(); ++y) {
      if (s.p_y(y) <= 0.0) continue;
      Group g;
      g.weight = s.p_y(y);
      for (std::size_t x = 0; x < s.nx(); ++x)
        if (s.p(x, y) > 0.0) g.energies.push_back(-s.log_p(x, y));
      groups_.push_back(std::move(g));
    }
  };
  switch (kind) {
    case SpectrumKind::conditional_x_given_y:
      add_conditional(src);
      break;
    case SpectrumKind::conditional_y_given_x:
      add_conditional(src.transposed());
      break;
    case SpectrumKind::joint_xy: {
      Group g;
      g.weight = 1.0;
      for (std::size_t x = 0; x < src.nx(); ++x)
        for (std::size_t y = 0; y < src.ny(); ++y)
          if (src.p(x, y) > 0.0) g.energies.push_back(-src.log_p(x, y));
      groups_.push_back(std::move(g));
      break;
    }
    case SpectrumKind::closed_form:
      throw OutOfRange("TiltedSpectrum: closed_form is not a discrete kind");
  }
  finish_init();
}

TiltedSpectrum::TiltedSpectrum(std::vector<Group> groups, SpectrumKind kind)
    : kind_(kind), groups_(std::move(groups)) {
  finish_init();
}

void TiltedSpectrum::finish_init() {
  eps_min_ = eps_max_ = 0.0;
  s_floor_min_ = s_floor_max_ = 0.0;
  for (const auto& g : groups_) {
    double lo = *std::min_element(g.energies.begin(), g.energies.end());
    double hi = *std::max_element(g.energies.begin(), g.energies.end());
    eps_min_ += g.weight * lo;
    eps_max_ += g.weight * hi;
    auto near = [&](double target) {
      std::size_t c = 0;
      for (double e : g.energies)
        if (std::abs(e - target) <= 1e-12) ++c;
      return static_cast<double>(c);
    };
    s_floor_min_ += g.weight * std::log(near(lo));
    s_floor_max_ += g.weight * std::log(near(hi));
  }
  degenerate_ = (eps_max_ - eps_min_) <= 1e-13;
  entropy_max_ = degenerate_ ? 0.0 : entropy_of_alpha(0.0);
}

double TiltedSpectrum::epsilon_of_alpha(double alpha) const {
  double e = 0.0;
  for (const auto& g : groups_) e += g.weight * tilted_stats(g.energies, alpha).eps;
  return e;
}

double TiltedSpectrum::entropy_of_alpha(double alpha) const {
  double h = 0.0;
  for (const auto& g : groups_) h += g.weight * tilted_stats(g.energies, alpha).h;
  return h;
}

double TiltedSpectrum::alpha_of_epsilon(double eps) const {
  if (degenerate_)
    throw DegenerateSpectrum("alpha_of_epsilon: single-point spectrum");
  if (!(eps > eps_min_ && eps < eps_max_))
    throw OutOfRange("alpha_of_epsilon: eps outside the open energy range");
  // eps(alpha) is strictly decreasing; expand [-1,1] until it brackets.
  double lo = -1.0, hi = 1.0;
  while (epsilon_of_alpha(hi) > eps && hi < kAlphaCap) {
    lo = hi;
    hi *= 2.0;
  }
  while (epsilon_of_alpha(lo) < eps && lo > -kAlphaCap) {
    hi = lo;
    lo *= 2.0;
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double em = epsilon_of_alpha(mid);
    if (std::abs(em - eps) <= 1e-12 && (hi - lo) <= 1e-9 * (1.0 + std::abs(mid)))
      return mid;
    if (em > eps)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double TiltedSpectrum::s_at(double eps) const {
  if (eps < eps_min_ - kEdgeTol || eps > eps_max_ + kEdgeTol)
    throw OutOfRange("s_at: eps outside [eps_min, eps_max]");
  if (degenerate_) return 0.0;
  // Edge values by continuity: log ground-state degeneracy.
  if (eps <= eps_min_ + kEdgeTol) return s_floor_min_;
  if (eps >= eps_max_ - kEdgeTol) return s_floor_max_;
  double alpha = alpha_of_epsilon(eps);
  double lz = 0.0;
  for (const auto& g : groups_) lz += g.weight * tilted_stats(g.energies, alpha).log_zeta;
  return lz + alpha * eps;
}

double TiltedSpectrum::s_prime(double eps) const { return alpha_of_epsilon(eps); }

std::pair<double, double> TiltedSpectrum::inverse_solve(double r) const {
  if (degenerate_)
    throw DegenerateSpectrum("s_inverse: single-point spectrum");
  if (r < 0.0 || r > entropy_max_ + 1e-9)
    throw OutOfRange("s_inverse: rate outside [0, max entropy]");
  if (r >= entropy_max_) return {0.0, epsilon_of_alpha(0.0)};
  // Entropy at the ground state is reached only in the alpha -> inf limit;
  // at or below it the inversion saturates at eps_min.
  if (r <= s_floor_min_ + 1e-13) return {kInf, eps_min_};
  double lo = 0.0, hi = 1.0;
  while (entropy_of_alpha(hi) > r) {
    lo = hi;
    hi *= 2.0;
    if (hi > kAlphaCap) return {kInf, eps_min_};
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (entropy_of_alpha(mid) > r)
      lo = mid;
    else
      hi = mid;
    if ((hi - lo) <= 1e-13 * (1.0 + hi)) break;
  }
  double alpha = 0.5 * (lo + hi);
  return {alpha, epsilon_of_alpha(alpha)};
}

double TiltedSpectrum::s_inverse(double r) const { return inverse_solve(r).second; }

double TiltedSpectrum::beta_c(double r) const { return inverse_solve(r).first; }

double TiltedSpectrum::phi(double beta) const {
  std::vector<double> terms;
  double v = 0.0;
  for (const auto& g : groups_) {
    terms.clear();
    for (double e : g.energies) terms.push_back(-beta * e);
    v += g.weight * log_sum_exp(terms);
  }
  return v;
}

const std::vector<SpectrumPoint>& TiltedSpectrum::table() const {
  std::call_once(table_once_, [this] {
    constexpr int kPoints = 2048;
    table_.reserve(kPoints);
    for (int i = 0; i < kPoints; ++i) {
      // tanh spacing: dense where |alpha| <= ~5, sparse in the tails.
      double u = -1.0 + 2.0 * (i + 0.5) / kPoints;
      double alpha = 6.0 * std::atanh(u);
      double eps = epsilon_of_alpha(alpha);
      table_.push_back({alpha, eps, entropy_of_alpha(alpha)});
    }
  });
  return table_;
}

HarmonicSpectrum::HarmonicSpectrum(double kappa, double a) : kappa_(kappa), a_(a) {
  if (!(kappa > 0.0) || !(a > 0.0))
    throw OutOfRange("HarmonicSpectrum: kappa and a must be positive");
}

double HarmonicSpectrum::s_at(double eps) const {
  if (eps < 0.0) throw OutOfRange("HarmonicSpectrum::s_at: eps < 0");
  if (eps == 0.0) return kNegInf;
  constexpr double four_pi_e = 4.0 * M_PI * M_E;
  return 0.5 * std::log(four_pi_e * eps / (kappa_ * a_ * a_));
}

double HarmonicSpectrum::s_prime(double eps) const {
  if (!(eps > 0.0)) throw OutOfRange("HarmonicSpectrum::s_prime: eps <= 0");
  return 0.5 / eps;
}

double HarmonicSpectrum::s_inverse(double r) const {
  constexpr double four_pi_e = 4.0 * M_PI * M_E;
  return kappa_ * a_ * a_ / four_pi_e * std::exp(2.0 * r);
}

double HarmonicSpectrum::phi(double beta) const {
  if (!(beta > 0.0)) throw OutOfRange("HarmonicSpectrum::phi: beta must be > 0");
  return 0.5 * std::log(2.0 * M_PI / (beta * kappa_ * a_ * a_));
}

TwoSidedSpectra two_sided_spectra(const JointSource& src) {
  return TwoSidedSpectra{
      TiltedSpectrum(src, SpectrumKind::conditional_x_given_y),
      TiltedSpectrum(src, SpectrumKind::conditional_y_given_x),
      TiltedSpectrum(src, SpectrumKind::joint_xy),
  };
}

}  // namespace swbin
