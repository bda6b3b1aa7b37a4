#include "sparsebfs/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sparsebfs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack when testing membership in the conjugate domain; absorbs
// rounding in β = −b·s/n round trips.
constexpr double kDomainSlack = 1e-12;

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(−t))
double softplus_neg(double t) {
  if (t > 0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

// Root s ∈ [0, 1] of s = σ(−(u + c·s)), c ≥ 0. With w = u + c·s this is the
// stationarity condition of min_w c·log(1 + e^{−w}) + ½(w − u)².
double logistic_fixed_point(double u, double c) {
  // ψ(s) = s − σ(−(u + c·s)) is increasing on [0, 1]; safeguarded Newton.
  double lo = 0.0, hi = 1.0;
  double s = sigmoid(-u);
  const double scale = std::max(1.0, c);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double t = u + c * s;
    const double psi = s - sigmoid(-t);
    if (std::abs(psi) * scale <= 1e-12) break;
    if (psi < 0) lo = s; else hi = s;
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon()) break;
    const double dpsi = 1.0 + c * sigmoid(t) * sigmoid(-t);
    double next = s - psi / dpsi;
    // Newton can bounce between the ends when c is large
    if (!(next > lo && next < hi) || std::abs(psi) > 0.5 * prev) next = 0.5 * (lo + hi);
    prev = std::abs(psi);
    s = next;
  }
  return s;
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kQuadratic: return "quadratic";
    case LossKind::kHuber: return "huber";
    case LossKind::kLogistic: return "logistic";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "quadratic") return LossKind::kQuadratic;
  if (name == "huber") return LossKind::kHuber;
  if (name == "logistic") return LossKind::kLogistic;
  throw std::invalid_argument("unknown loss: " + std::string(name));
}

Loss::Loss(LossKind kind, Vector b, double delta) : kind_(kind), b_(std::move(b)), delta_(delta) {
  if (b_.size() < 1) throw std::invalid_argument("Loss: need at least one observation");
  if (!b_.allFinite()) throw std::invalid_argument("Loss: observations must be finite");
}

Loss Loss::quadratic(Vector b) { return Loss(LossKind::kQuadratic, std::move(b), 0.0); }

Loss Loss::huber(Vector b, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("Loss::huber: delta must be positive");
  return Loss(LossKind::kHuber, std::move(b), delta);
}

Loss Loss::logistic(Vector b) {
  for (double bi : b)
    if (bi != 1.0 && bi != -1.0) throw std::invalid_argument("Loss::logistic: labels must be ±1");
  return Loss(LossKind::kLogistic, std::move(b), 0.0);
}

void Loss::check_dim(const Vector& z, const char* what) const {
  if (z.size() != b_.size())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                std::to_string(z.size()) + ", expected " + std::to_string(b_.size()) + ")");
}

double Loss::gamma() const {
  const double n = static_cast<double>(b_.size());
  return kind_ == LossKind::kLogistic ? 4.0 * n : n;
}

double Loss::value(const Vector& z) const {
  check_dim(z, "Loss::value");
  const double n = static_cast<double>(b_.size());
  double sum = 0.0;
  switch (kind_) {
    case LossKind::kQuadratic:
      return (b_ - z).squaredNorm() / (2.0 * n);
    case LossKind::kHuber:
      for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double r = std::abs(z[i] - b_[i]);
        sum += r <= delta_ ? 0.5 * r * r : delta_ * (r - 0.5 * delta_);
      }
      return sum / n;
    case LossKind::kLogistic:
      for (Eigen::Index i = 0; i < z.size(); ++i) sum += softplus_neg(b_[i] * z[i]);
      return sum / n;
  }
  return sum;
}

Vector Loss::gradient(const Vector& z) const {
  check_dim(z, "Loss::gradient");
  const double n = static_cast<double>(b_.size());
  Vector g(z.size());
  switch (kind_) {
    case LossKind::kQuadratic:
      g = (z - b_) / n;
      break;
    case LossKind::kHuber:
      for (Eigen::Index i = 0; i < z.size(); ++i) g[i] = std::clamp(z[i] - b_[i], -delta_, delta_) / n;
      break;
    case LossKind::kLogistic:
      for (Eigen::Index i = 0; i < z.size(); ++i) g[i] = -b_[i] * sigmoid(-b_[i] * z[i]) / n;
      break;
  }
  return g;
}

bool Loss::in_conjugate_domain(const Vector& beta) const {
  check_dim(beta, "Loss::in_conjugate_domain");
  if (!beta.allFinite()) return false;
  const double n = static_cast<double>(b_.size());
  switch (kind_) {
    case LossKind::kQuadratic:
      return true;
    case LossKind::kHuber:
      return beta.cwiseAbs().maxCoeff() <= (delta_ / n) * (1.0 + kDomainSlack);
    case LossKind::kLogistic:
      for (Eigen::Index i = 0; i < beta.size(); ++i) {
        const double s = -n * b_[i] * beta[i];
        if (s < -kDomainSlack || s > 1.0 + kDomainSlack) return false;
      }
      return true;
  }
  return false;
}

double Loss::conjugate(const Vector& beta) const {
  if (!in_conjugate_domain(beta)) return kInf;
  const double n = static_cast<double>(b_.size());
  switch (kind_) {
    case LossKind::kQuadratic:
    case LossKind::kHuber:
      return beta.dot(b_) + 0.5 * n * beta.squaredNorm();
    case LossKind::kLogistic: {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < beta.size(); ++i) {
        const double s = std::clamp(-n * b_[i] * beta[i], 0.0, 1.0);
        sum += xlogx(s) + xlogx(1.0 - s);
      }
      return sum / n;
    }
  }
  return kInf;
}

Vector Loss::conjugate_gradient(const Vector& beta) const {
  check_dim(beta, "Loss::conjugate_gradient");
  const double n = static_cast<double>(b_.size());
  if (kind_ != LossKind::kLogistic) return b_ + n * beta;
  Vector g(beta.size());
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    const double s = std::clamp(-n * b_[i] * beta[i], 1e-12, 1.0 - 1e-12);
    g[i] = -b_[i] * std::log(s / (1.0 - s));
  }
  return g;
}

Vector Loss::project_conjugate_domain(const Vector& beta) const {
  check_dim(beta, "Loss::project_conjugate_domain");
  const double n = static_cast<double>(b_.size());
  switch (kind_) {
    case LossKind::kQuadratic:
      return beta;
    case LossKind::kHuber:
      return beta.cwiseMax(-delta_ / n).cwiseMin(delta_ / n);
    case LossKind::kLogistic: {
      Vector out(beta.size());
      for (Eigen::Index i = 0; i < beta.size(); ++i) {
        const double s = std::clamp(-n * b_[i] * beta[i], 0.0, 1.0);
        out[i] = -b_[i] * s / n;
      }
      return out;
    }
  }
  return beta;
}

Vector Loss::prox(double tau, const Vector& v) const {
  check_dim(v, "Loss::prox");
  if (tau < 0) throw std::invalid_argument("Loss::prox: tau must be nonnegative");
  if (tau == 0) return v;
  const double c = tau / static_cast<double>(b_.size());
  Vector y(v.size());
  switch (kind_) {
    case LossKind::kQuadratic:
      y = (v + c * b_) / (1.0 + c);
      break;
    case LossKind::kHuber:
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double w = v[i] - b_[i];
        const double r = std::abs(w) <= delta_ * (1.0 + c) ? w / (1.0 + c) : w - c * delta_ * (w > 0 ? 1.0 : -1.0);
        y[i] = b_[i] + r;
      }
      break;
    case LossKind::kLogistic:
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double u = b_[i] * v[i];
        const double s = logistic_fixed_point(u, c);
        y[i] = b_[i] * (u + c * s);
      }
      break;
  }
  return y;
}

Vector Loss::prox_conjugate(double tau, const Vector& v) const {
  check_dim(v, "Loss::prox_conjugate");
  if (!(tau > 0)) throw std::invalid_argument("Loss::prox_conjugate: tau must be positive");
  const double n = static_cast<double>(b_.size());
  switch (kind_) {
    case LossKind::kQuadratic:
      return (v - tau * b_) / (1.0 + tau * n);
    case LossKind::kHuber:
      return ((v - tau * b_) / (1.0 + tau * n)).cwiseMax(-delta_ / n).cwiseMin(delta_ / n);
    case LossKind::kLogistic: {
      // Moreau: β = v − τ·y with y = prox_{L/τ}(v/τ). Writing y through its
      // fixed point gives β_i = −b_i·s_i/n directly, which lands in the
      // domain without cancellation.
      const double c = 1.0 / (tau * n);
      Vector beta(v.size());
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double s = logistic_fixed_point(b_[i] * v[i] / tau, c);
        beta[i] = -b_[i] * s / n;
      }
      return beta;
    }
  }
  return v;
}

}  // namespace sparsebfs
