#pragma once

#include <string>
#include <vector>

#include "swbin/errors.hpp"
#include "swbin/numeric.hpp"

namespace swbin {

class JointSource;

// Conditional distribution Q(x|y): one distribution over x per column y.
struct ConditionalType {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> q;  // row-major, q[x * ny + y]

  double operator()(std::size_t x, std::size_t y) const { return q[x * ny + y]; }
  double& at(std::size_t x, std::size_t y) { return q[x * ny + y]; }

  // Each column must sum to 1 within 1e-12, entries >= 0.
  void validate() const;
};

// Normalized joint distribution Q(x,y) on the same alphabets as a source.
struct JointType {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> q;  // row-major, q[x * ny + y]

  double operator()(std::size_t x, std::size_t y) const { return q[x * ny + y]; }
  double& at(std::size_t x, std::size_t y) { return q[x * ny + y]; }

  void validate() const;
  std::vector<double> marginal_y() const;
  std::vector<double> marginal_x() const;
  double entropy_joint() const;
  double entropy_x_given_y() const;
};

// Finite-alphabet joint p.m.f. P(x,y) with cached marginals and entropies.
// Immutable after construction; safe for unrestricted concurrent use.
class JointSource {
 public:
  JointSource(std::vector<std::string> alphabet_x,
              std::vector<std::string> alphabet_y, std::vector<double> p);

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  const std::vector<std::string>& alphabet_x() const { return ax_; }
  const std::vector<std::string>& alphabet_y() const { return ay_; }

  double p(std::size_t x, std::size_t y) const { return p_[x * ny_ + y]; }
  double log_p(std::size_t x, std::size_t y) const { return logp_[x * ny_ + y]; }
  const std::vector<double>& p_flat() const { return p_; }
  double p_x(std::size_t x) const { return px_[x]; }
  double p_y(std::size_t y) const { return py_[y]; }
  const std::vector<double>& marginal_x() const { return px_; }
  const std::vector<double>& marginal_y() const { return py_; }

  double entropy_x() const { return h_x_; }
  double entropy_y() const { return h_y_; }
  double joint_entropy() const { return h_xy_; }
  double entropy_x_given_y() const { return h_xy_ - h_y_; }
  double entropy_y_given_x() const { return h_xy_ - h_x_; }

  // Source with the roles of X and Y swapped.
  JointSource transposed() const;

  JointType as_joint_type() const;
  ConditionalType conditional_x_given_y() const;

 private:
  std::vector<std::string> ax_, ay_;
  std::size_t nx_, ny_;
  std::vector<double> p_;
  std::vector<double> logp_;  // -inf outside the support
  std::vector<double> px_, py_;
  double h_x_, h_y_, h_xy_;
};

// Mismatched model P~(x,y) on the same alphabets as a base source.
// The y-marginal must agree with the base within 1e-10.
class MismatchModel {
 public:
  MismatchModel(const JointSource& base, std::vector<double> p_tilde);

  double p(std::size_t x, std::size_t y) const { return p_[x * ny_ + y]; }
  double log_p(std::size_t x, std::size_t y) const { return logp_[x * ny_ + y]; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }

  // -E_P ln P~(X|Y), expectation under the true source.
  double cross_entropy_x_given_y(const JointSource& src) const;
  // -E_P ln P~(X,Y).
  double cross_entropy_joint(const JointSource& src) const;

  JointSource as_source(const JointSource& base) const;

 private:
  std::size_t nx_, ny_;
  std::vector<double> p_;
  std::vector<double> logp_;
};

// H(X|Y) in nats.
double entropy_x_given_y(const JointSource& src);

// H(X,Y) in nats.
double joint_entropy(const JointSource& src);

// D(Q || P) in nats; throws AbsoluteContinuityViolation if Q puts mass
// where P has none.
double divergence(const JointType& q, const JointSource& src);

// The tilted conditional Q_alpha(x|y) ∝ P^alpha(x,y), computed in the log
// domain so that |alpha| up to a few hundred stays exact.
ConditionalType tilted_conditional(const JointSource& src, double alpha);

// Per-symbol energy eps = -E_Q[ln P(X,Y)] >= 0. Conditional types are
// weighted by the source's y-marginal. Throws InfiniteEnergy if the type
// touches a zero of the model.
double energy_of_type(const ConditionalType& q, const JointSource& src);
double energy_of_type(const JointType& q, const JointSource& src);
double energy_of_type(const JointType& q, const MismatchModel& model);

// The signed log-likelihood rate of Theorem-style constraints: -energy.
inline double log_likelihood_rate(const JointType& q, const JointSource& src) {
  return -energy_of_type(q, src);
}

}  // namespace swbin
