#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "swbin/errors.hpp"
#include "swbin/source.hpp"

namespace swbin {

enum class SpectrumKind {
  conditional_x_given_y,
  conditional_y_given_x,
  joint_xy,
  closed_form,
};

// A point (alpha, eps, s) on the entropy-energy curve: alpha is the tilt
// solving the energy constraint and also s'(eps).
struct SpectrumPoint {
  double alpha;
  double epsilon;
  double entropy;
};

// Entropy-vs-energy curve s(eps) with its Legendre structure. Immutable
// after construction; the lazy plotting table fills under a once-only lock.
class Spectrum {
 public:
  virtual ~Spectrum() = default;

  virtual SpectrumKind kind() const = 0;
  virtual double eps_min() const = 0;
  virtual double eps_max() const = 0;
  // max_eps s(eps), attained where s'(eps) = 0.
  virtual double entropy_max() const = 0;

  virtual double s_at(double eps) const = 0;
  virtual double s_prime(double eps) const = 0;
  // Inverse on the increasing branch: the ground-state energy after
  // dilution at rate r.
  virtual double s_inverse(double r) const = 0;
  // Normalized log-partition function of the full (non-diluted) system.
  virtual double phi(double beta) const = 0;

  // beta_c(r) = s'[s^-1(r)], the glassy critical point. +inf when the
  // ground-state degeneracy entropy already exceeds r.
  virtual double beta_c(double r) const;

  // phi_D(beta) = phi(beta) - r below beta_c, -beta * s^-1(r) above.
  double phi_diluted(double beta, double r) const;
};

// Discrete spectrum of a mixture of subsystems: group g carries weight w_g
// and energy levels {e}; entropies are maximized over conditionals via the
// tilted family Q_alpha.
class TiltedSpectrum final : public Spectrum {
 public:
  struct Group {
    double weight;
    std::vector<double> energies;
  };

  TiltedSpectrum(const JointSource& src, SpectrumKind kind);
  // Custom weights/levels (used by the error-exponent inner problem, where
  // the y-weights come from the outer type rather than the source).
  TiltedSpectrum(std::vector<Group> groups, SpectrumKind kind);

  SpectrumKind kind() const override { return kind_; }
  double eps_min() const override { return eps_min_; }
  double eps_max() const override { return eps_max_; }
  double entropy_max() const override { return entropy_max_; }
  bool degenerate() const { return degenerate_; }

  // Limits of s at the spectrum edges: log ground-state degeneracy.
  double ground_state_entropy() const { return s_floor_min_; }
  double ceiling_state_entropy() const { return s_floor_max_; }

  double epsilon_of_alpha(double alpha) const;
  double entropy_of_alpha(double alpha) const;
  // Bracketed bisection on the monotone map alpha -> eps; requires
  // eps strictly inside (eps_min, eps_max).
  double alpha_of_epsilon(double eps) const;

  double s_at(double eps) const override;
  double s_prime(double eps) const override;
  double s_inverse(double r) const override;
  double beta_c(double r) const override;
  double phi(double beta) const override;

  // Lazy 2048-point table, tanh-spaced in alpha; for plotting/CSV only.
  const std::vector<SpectrumPoint>& table() const;

 private:
  void finish_init();
  // Solves s(eps)=r on the increasing branch; returns (alpha, eps).
  std::pair<double, double> inverse_solve(double r) const;

  SpectrumKind kind_;
  std::vector<Group> groups_;
  double eps_min_, eps_max_;
  double s_floor_min_, s_floor_max_;
  double entropy_max_;
  bool degenerate_;

  mutable std::once_flag table_once_;
  mutable std::vector<SpectrumPoint> table_;
};

// Closed-form spectrum of a harmonic potential on a grid with spacing a:
// s(eps) = (1/2) ln(4 pi e eps / (kappa a^2)).
class HarmonicSpectrum final : public Spectrum {
 public:
  HarmonicSpectrum(double kappa, double a);

  SpectrumKind kind() const override { return SpectrumKind::closed_form; }
  double eps_min() const override { return 0.0; }
  double eps_max() const override { return kInf; }
  double entropy_max() const override { return kInf; }

  double s_at(double eps) const override;
  double s_prime(double eps) const override;
  double s_inverse(double r) const override;
  double phi(double beta) const override;

  double kappa() const { return kappa_; }
  double spacing() const { return a_; }

 private:
  double kappa_, a_;
};

// The three spectra of the two-sided problem: s_{X|Y}, s_{Y|X}, s_{XY}.
struct TwoSidedSpectra {
  TiltedSpectrum x_given_y;
  TiltedSpectrum y_given_x;
  TiltedSpectrum joint;
};

TwoSidedSpectra two_sided_spectra(const JointSource& src);

}  // namespace swbin
