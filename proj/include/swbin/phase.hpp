#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swbin/source.hpp"
#include "swbin/spectrum.hpp"

namespace swbin {

enum class DecoderKind { matched, universal, mismatched };

enum class Phase { ferromagnetic, glassy, paramagnetic };

struct PhaseLabel {
  Phase phase;
  bool on_boundary = false;
};

// A two-sided rate/temperature query point.
struct TwoSidedQuery {
  double rate_x = 0.0;
  double rate_y = 0.0;
  double beta = 1.0;
};

// Which partition-function term dominates in the two-sided decomposition.
enum class DominantTerm { cc, ec, ce, ee };

struct BoundaryPoint {
  std::string curve_id;  // "ferro_glassy" | "ferro_para" | "para_glassy"
  double rate;
  double temperature;
};

const char* phase_name(Phase p);
const char* dominant_term_name(DominantTerm t);

// Phase boundaries and (R, T) classification for the matched,
// min-conditional-entropy (universal) and mismatched decoders, plus the
// two-sided dominance map. Pure queries over immutable state.
class PhaseDiagram {
 public:
  explicit PhaseDiagram(const JointSource& src);
  PhaseDiagram(const JointSource& src, const MismatchModel& mismatch);

  const JointSource& source() const { return src_; }
  const TiltedSpectrum& spectrum_x_given_y() const { return spectra_.x_given_y; }
  const TiltedSpectrum& spectrum_y_given_x() const { return spectra_.y_given_x; }
  const TiltedSpectrum& spectrum_joint() const { return spectra_.joint; }

  // Gamma(beta) = beta H(X,Y) + phi(beta): the rate above which the correct
  // term dominates the paramagnetic competitors.
  double gamma(double beta) const;
  // Inverse of Gamma on its decreasing branch beta in [0, 1].
  double gamma_inverse(double r) const;

  // Mismatched analogues (throw OutOfRange without a mismatch model).
  double gamma_mismatched(double beta) const;
  double ferro_glassy_rate(DecoderKind decoder) const;

  PhaseLabel classify(double rate, double temperature, DecoderKind decoder) const;

  // T = (ln|X| - H(X|Y)) / (ln|X| - r), the universal ferro-para boundary.
  double universal_ferro_para_temperature(double r) const;

  DominantTerm two_sided_dominance(const TwoSidedQuery& q) const;
  bool reliability_region_check(const TwoSidedQuery& q) const;

  std::vector<BoundaryPoint> sample_boundaries(DecoderKind decoder,
                                               int grid,
                                               double t_max = 4.0) const;

 private:
  const TiltedSpectrum& glassy_spectrum(DecoderKind decoder) const;

  JointSource src_;
  TwoSidedSpectra spectra_;
  std::optional<MismatchModel> mismatch_;
  std::optional<TiltedSpectrum> spectrum_tilde_;
  double eps_c_tilde_ = 0.0;   // -E_P ln P~(X,Y)
  double rate_fg_tilde_ = 0.0; // -E_P ln P~(X|Y)
};

}  // namespace swbin
