#pragma once

#include <optional>
#include <vector>

#include "swbin/source.hpp"
#include "swbin/spectrum.hpp"

namespace swbin {

enum class MetricKind { matched, mismatched, min_conditional_entropy };

enum class ExponentPhase { zero, ferro_beta_ge_1, ferro_beta_lt_1, positive };

const char* exponent_phase_name(ExponentPhase p);

// Result of the outer minimization over joint types: the exponent value
// (+inf sentinel when no type is feasible), the minimizing joint type and
// the competitor conditional achieving the inner minimum.
struct ExponentResult {
  double value = 0.0;
  JointType minimizing_q_xy;
  ConditionalType minimizing_q_xprime;
  bool feasible = true;
  ExponentPhase phase = ExponentPhase::zero;
};

// The inner threshold exponent E_1(t): cheapest [R - H(X'|Y)]_+ among
// competitor conditionals whose growth term beta*l(Q') + [H-R]_+ reaches t.
struct InnerExponent {
  double t = 0.0;
  double value = 0.0;   // E_1(t); +inf when the constraint set is empty
  double r0 = 0.0;      // E_1 vanishes for t <= r0
};

// Bit-error exponent machinery for one source and decoding metric.
// Immutable after construction; all queries are pure.
class ExponentSolver {
 public:
  ExponentSolver(const JointSource& src, MetricKind metric,
                 std::optional<MismatchModel> model = std::nullopt);

  const JointSource& source() const { return src_; }
  MetricKind metric() const { return metric_; }

  // A(Q_XY, R, beta): inner minimum over competitor conditionals sharing
  // Q's Y-marginal. beta = kInf selects the word-MAP constraint l' >= l.
  double a_term(const JointType& q_xy, double rate, double beta) const;

  // E(R, beta) = min_Q [ D(Q||P) + A(Q, R, beta) ].
  ExponentResult exponent(double rate, double beta) const;

  // E(R, inf), the word-error exponent.
  double exponent_word(double rate) const;

  // E_1 and r_0 for an explicit threshold t and Y-marginal.
  InnerExponent inner_e1(double t, double beta, double rate,
                         const std::vector<double>& q_y) const;

  // Analytic three-region label (two regions for the entropy metric).
  ExponentPhase exponent_phase(double rate, double beta) const;

 private:
  struct InnerSolve {
    double value;
    double r0;
    double alpha;  // tilt reconstructing the minimizing competitor
  };

  // Signed metric l(Q) = -E_Q[energy]; -inf when Q leaves the metric
  // support (such outer types are never matched by any competitor).
  double metric_rate(const std::vector<double>& q) const;
  double cond_entropy(const std::vector<double>& q) const;
  TiltedSpectrum weighted_spectrum(const std::vector<double>& w) const;
  InnerSolve solve_inner(const TiltedSpectrum& spec, double t, double beta,
                         double rate) const;
  InnerSolve solve_inner_word(const TiltedSpectrum& spec, double eps_q,
                              double rate) const;
  double objective(const std::vector<double>& q, double rate,
                   double beta) const;
  ConditionalType competitor_from_alpha(const std::vector<double>& w,
                                        double alpha) const;
  JointType to_joint_type(const std::vector<double>& q) const;
  std::vector<double> y_marginal(const std::vector<double>& q) const;

  JointSource src_;
  MetricKind metric_;
  std::optional<MismatchModel> model_;
  // Support cells of P in row-major order: the outer simplex coordinates.
  std::vector<std::size_t> cells_;
  std::vector<double> cell_p_;        // P at each cell
  std::vector<double> cell_log_p_;    // ln P
  std::vector<double> cell_log_m_;    // ln of the metric model (-inf allowed)
  std::vector<double> p_as_q_;        // P itself as an outer candidate
};

// Free-function forms mirroring the solver methods.
double a_term(const JointSource& src, const JointType& q_xy, double rate,
              double beta, MetricKind metric,
              std::optional<MismatchModel> model = std::nullopt);
ExponentResult exponent(const JointSource& src, double rate, double beta,
                        MetricKind metric = MetricKind::matched,
                        std::optional<MismatchModel> model = std::nullopt);
double exponent_word(const JointSource& src, double rate);
InnerExponent inner_e1(const JointSource& src, double t, double beta,
                       double rate, const std::vector<double>& q_y,
                       MetricKind metric = MetricKind::matched,
                       std::optional<MismatchModel> model = std::nullopt);
ExponentPhase exponent_phase(const JointSource& src, double rate, double beta);

}  // namespace swbin
