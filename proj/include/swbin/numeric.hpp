#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace swbin {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(sum_i exp(v_i)), stable for arguments of any magnitude.
inline double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// log(exp(a) - exp(b)) for a >= b; -inf when they coincide to rounding.
inline double log_sub_exp(double a, double b) {
  if (b == kNegInf) return a;
  double d = -std::expm1(b - a);
  if (d <= 0.0) return kNegInf;
  return a + std::log(d);
}

// Streaming log-sum-exp accumulator (max plus rescaled sum).
class LogAccumulator {
 public:
  void add(double logx) {
    if (logx == kNegInf) return;
    if (logx > max_) {
      if (max_ != kNegInf) sum_ *= std::exp(max_ - logx);
      sum_ += 1.0;
      max_ = logx;
    } else {
      sum_ += std::exp(logx - max_);
    }
  }
  double value() const {
    if (max_ == kNegInf) return kNegInf;
    return max_ + std::log(sum_);
  }
  bool empty() const { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

// x ln x with the 0 ln 0 = 0 convention.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// Binary entropy in nats.
inline double binary_entropy(double p) { return -xlogx(p) - xlogx(1.0 - p); }

// Entropy of a distribution in nats.
inline double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h -= xlogx(x);
  return h;
}

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace swbin
