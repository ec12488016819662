#include "swbin/source.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace swbin {

namespace {

constexpr double kSumTol = 1e-12;

void check_nonneg(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0)) {
      std::ostringstream os;
      os << what << ": negative entry at flat index " << i;
      throw InvalidDistribution(os.str());
    }
  }
}

}  // namespace

void ConditionalType::validate() const {
  if (q.size() != nx * ny) throw InvalidDistribution("ConditionalType: shape mismatch");
  check_nonneg(q, "ConditionalType");
  for (std::size_t y = 0; y < ny; ++y) {
    double s = 0.0;
    for (std::size_t x = 0; x < nx; ++x) s += q[x * ny + y];
    if (std::abs(s - 1.0) > kSumTol) {
      std::ostringstream os;
      os << "ConditionalType: column " << y << " sums to " << s;
      throw InvalidDistribution(os.str());
    }
  }
}

void JointType::validate() const {
  if (q.size() != nx * ny) throw InvalidDistribution("JointType: shape mismatch");
  check_nonneg(q, "JointType");
  double s = std::accumulate(q.begin(), q.end(), 0.0);
  if (std::abs(s - 1.0) > kSumTol) {
    std::ostringstream os;
    os << "JointType: entries sum to " << s;
    throw InvalidDistribution(os.str());
  }
}

std::vector<double> JointType::marginal_y() const {
  std::vector<double> m(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) m[y] += q[x * ny + y];
  return m;
}

std::vector<double> JointType::marginal_x() const {
  std::vector<double> m(nx, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) m[x] += q[x * ny + y];
  return m;
}

double JointType::entropy_joint() const { return entropy(q); }

double JointType::entropy_x_given_y() const {
  return entropy_joint() - entropy(marginal_y());
}

JointSource::JointSource(std::vector<std::string> alphabet_x,
                         std::vector<std::string> alphabet_y,
                         std::vector<double> p)
    : ax_(std::move(alphabet_x)),
      ay_(std::move(alphabet_y)),
      nx_(ax_.size()),
      ny_(ay_.size()),
      p_(std::move(p)) {
  if (nx_ == 0 || ny_ == 0) throw InvalidDistribution("JointSource: empty alphabet");
  if (p_.size() != nx_ * ny_) {
    std::ostringstream os;
    os << "JointSource: expected " << nx_ << "x" << ny_ << " = " << nx_ * ny_
       << " entries, got " << p_.size();
    throw InvalidDistribution(os.str());
  }
  check_nonneg(p_, "JointSource");
  double s = std::accumulate(p_.begin(), p_.end(), 0.0);
  if (std::abs(s - 1.0) > kSumTol) {
    std::ostringstream os;
    os << "JointSource: entries sum to " << s << " (must be 1 within 1e-12)";
    throw InvalidDistribution(os.str());
  }

  logp_.resize(p_.size());
  for (std::size_t i = 0; i < p_.size(); ++i)
    logp_[i] = p_[i] > 0.0 ? std::log(p_[i]) : kNegInf;

  px_.assign(nx_, 0.0);
  py_.assign(ny_, 0.0);
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y) {
      px_[x] += p_[x * ny_ + y];
      py_[y] += p_[x * ny_ + y];
    }

  h_x_ = entropy(px_);
  h_y_ = entropy(py_);
  h_xy_ = entropy(p_);
}

JointSource JointSource::transposed() const {
  std::vector<double> pt(nx_ * ny_);
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y) pt[y * nx_ + x] = p_[x * ny_ + y];
  return JointSource(ay_, ax_, std::move(pt));
}

JointType JointSource::as_joint_type() const { return JointType{nx_, ny_, p_}; }

ConditionalType JointSource::conditional_x_given_y() const {
  ConditionalType c{nx_, ny_, std::vector<double>(nx_ * ny_, 0.0)};
  for (std::size_t y = 0; y < ny_; ++y) {
    if (py_[y] <= 0.0) {
      // Unreached conditioning symbol: park the mass on x = 0 so columns
      // still normalize.
      c.at(0, y) = 1.0;
      continue;
    }
    for (std::size_t x = 0; x < nx_; ++x) c.at(x, y) = p(x, y) / py_[y];
  }
  return c;
}

MismatchModel::MismatchModel(const JointSource& base, std::vector<double> p_tilde)
    : nx_(base.nx()), ny_(base.ny()), p_(std::move(p_tilde)) {
  if (p_.size() != nx_ * ny_)
    throw InvalidDistribution("MismatchModel: shape mismatch with base source");
  check_nonneg(p_, "MismatchModel");
  double s = std::accumulate(p_.begin(), p_.end(), 0.0);
  if (std::abs(s - 1.0) > kSumTol)
    throw InvalidDistribution("MismatchModel: entries must sum to 1 within 1e-12");
  for (std::size_t y = 0; y < ny_; ++y) {
    double my = 0.0;
    for (std::size_t x = 0; x < nx_; ++x) my += p_[x * ny_ + y];
    if (std::abs(my - base.p_y(y)) > 1e-10) {
      std::ostringstream os;
      os << "MismatchModel: y-marginal mismatch at column " << y << " ("
         << my << " vs " << base.p_y(y) << ")";
      throw InvalidDistribution(os.str());
    }
  }
  for (std::size_t i = 0; i < p_.size(); ++i)
    if (base.p(i / ny_, i % ny_) > 0.0 && p_[i] <= 0.0) {
      std::ostringstream os;
      os << "MismatchModel: zero model mass at (" << i / ny_ << ", " << i % ny_
         << ") inside the source support";
      throw AbsoluteContinuityViolation(os.str());
    }
  logp_.resize(p_.size());
  for (std::size_t i = 0; i < p_.size(); ++i)
    logp_[i] = p_[i] > 0.0 ? std::log(p_[i]) : kNegInf;
}

double MismatchModel::cross_entropy_x_given_y(const JointSource& src) const {
  double s = 0.0;
  for (std::size_t x = 0; x < nx_; ++x)
    for (std::size_t y = 0; y < ny_; ++y) {
      double w = src.p(x, y);
      if (w <= 0.0) continue;
      double cond = p(x, y) / src.p_y(y);
      if (cond <= 0.0) return kInf;
      s -= w * std::log(cond);
    }
  return s;
}

double MismatchModel::cross_entropy_joint(const JointSource& src) const {
  double s = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) {
    double w = src.p_flat()[i];
    if (w <= 0.0) continue;
    if (logp_[i] == kNegInf) return kInf;
    s -= w * logp_[i];
  }
  return s;
}

JointSource MismatchModel::as_source(const JointSource& base) const {
  return JointSource(base.alphabet_x(), base.alphabet_y(), p_);
}

double entropy_x_given_y(const JointSource& src) {
  return src.entropy_x_given_y();
}

double joint_entropy(const JointSource& src) { return src.joint_entropy(); }

double divergence(const JointType& q, const JointSource& src) {
  if (q.nx != src.nx() || q.ny != src.ny())
    throw InvalidDistribution("divergence: shape mismatch");
  double d = 0.0;
  for (std::size_t x = 0; x < q.nx; ++x)
    for (std::size_t y = 0; y < q.ny; ++y) {
      double qv = q(x, y);
      if (qv <= 0.0) continue;
      double pv = src.p(x, y);
      if (pv <= 0.0) {
        std::ostringstream os;
        os << "divergence: Q(" << x << "," << y << ") > 0 but P is zero there";
        throw AbsoluteContinuityViolation(os.str());
      }
      d += qv * std::log(qv / pv);
    }
  return std::max(d, 0.0);
}

ConditionalType tilted_conditional(const JointSource& src, double alpha) {
  ConditionalType c{src.nx(), src.ny(), std::vector<double>(src.nx() * src.ny(), 0.0)};
  std::vector<double> scaled(src.nx());
  for (std::size_t y = 0; y < src.ny(); ++y) {
    if (src.p_y(y) <= 0.0) {
      c.at(0, y) = 1.0;
      continue;
    }
    bool any = false;
    for (std::size_t x = 0; x < src.nx(); ++x) {
      double lp = src.log_p(x, y);
      scaled[x] = lp == kNegInf ? kNegInf : alpha * lp;
      any = any || lp != kNegInf;
    }
    if (!any) {
      std::ostringstream os;
      os << "tilted_conditional: all-zero column for y = " << y
         << " with positive marginal";
      throw DegenerateRow(os.str());
    }
    double lz = log_sum_exp(scaled);
    for (std::size_t x = 0; x < src.nx(); ++x)
      if (scaled[x] != kNegInf) c.at(x, y) = std::exp(scaled[x] - lz);
  }
  return c;
}

double energy_of_type(const ConditionalType& q, const JointSource& src) {
  if (q.nx != src.nx() || q.ny != src.ny())
    throw InvalidDistribution("energy_of_type: shape mismatch");
  double e = 0.0;
  for (std::size_t y = 0; y < q.ny; ++y) {
    double w = src.p_y(y);
    if (w <= 0.0) continue;
    for (std::size_t x = 0; x < q.nx; ++x) {
      double qv = q(x, y);
      if (qv <= 0.0) continue;
      double lp = src.log_p(x, y);
      if (lp == kNegInf)
        throw InfiniteEnergy("energy_of_type: type touches a zero of the model");
      e -= w * qv * lp;
    }
  }
  return e;
}

double energy_of_type(const JointType& q, const JointSource& src) {
  if (q.nx != src.nx() || q.ny != src.ny())
    throw InvalidDistribution("energy_of_type: shape mismatch");
  double e = 0.0;
  for (std::size_t x = 0; x < q.nx; ++x)
    for (std::size_t y = 0; y < q.ny; ++y) {
      double qv = q(x, y);
      if (qv <= 0.0) continue;
      double lp = src.log_p(x, y);
      if (lp == kNegInf)
        throw InfiniteEnergy("energy_of_type: type touches a zero of the model");
      e -= qv * lp;
    }
  return e;
}

double energy_of_type(const JointType& q, const MismatchModel& model) {
  if (q.nx != model.nx() || q.ny != model.ny())
    throw InvalidDistribution("energy_of_type: shape mismatch");
  double e = 0.0;
  for (std::size_t x = 0; x < q.nx; ++x)
    for (std::size_t y = 0; y < q.ny; ++y) {
      double qv = q(x, y);
      if (qv <= 0.0) continue;
      double lp = model.log_p(x, y);
      if (lp == kNegInf)
        throw InfiniteEnergy("energy_of_type: type touches a zero of the model");
      e -= qv * lp;
    }
  return e;
}

}  // namespace swbin
