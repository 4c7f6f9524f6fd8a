// perspective.hpp — Left/right multiplication superoperators and their logs,
// perspectives g(L,R) = f(L/R)·R of operator convex functions, quasi-entropy
// quadratic forms, and joint-convexity margins.

#pragma once

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "core.hpp"
#include "tensor.hpp"

namespace opssa {

// Row-major vectorization: entry (i,j) of an n×n matrix maps to coordinate
// i·n + j.
inline Vector vectorize(const Matrix& x) {
  const Index rows = x.rows();
  const Index cols = x.cols();
  Vector v(rows * cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) v(i * cols + j) = x(i, j);
  return v;
}

inline Matrix devectorize(const Vector& v, Index n) {
  if (v.size() != n * n) throw DimensionError("devectorize: vector length is not n²");
  Matrix x(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) x(i, j) = v(i * n + j);
  return x;
}

// Dense n²×n² matrix acting on row-major-vectorized n×n matrices.
struct Superoperator {
  Matrix matrix;
  Index dim = 0;

  Matrix apply(const Matrix& x) const {
    if (x.rows() != dim || x.cols() != dim)
      throw DimensionError("Superoperator::apply: operand must be " + std::to_string(dim) + "x" +
                           std::to_string(dim));
    return devectorize(matrix * vectorize(x), dim);
  }
};

// L: X ↦ rho·X and R: X ↦ X·sigma. In the row-major convention these are
// kron(rho, I) and kron(I, sigmaᵀ); they always commute.
inline Superoperator left_superop(const Matrix& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("left_superop: matrix must be square");
  const Index n = rho.rows();
  return {kron(rho, Matrix::Identity(n, n)), n};
}

inline Superoperator right_superop(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols()) throw DimensionError("right_superop: matrix must be square");
  const Index n = sigma.rows();
  return {kron(Matrix::Identity(n, n), sigma.transpose()), n};
}

namespace detail {

// Mean base matrix reconstructed from a candidate multiplication
// superoperator, together with the reconstruction residual.
inline std::pair<Matrix, double> extract_left_base(const Superoperator& s) {
  const Index n = s.dim;
  Matrix base(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) {
      Complex acc = 0;
      for (Index j = 0; j < n; ++j) acc += s.matrix(i * n + j, k * n + j);
      base(i, k) = acc / static_cast<double>(n);
    }
  const double resid = (s.matrix - kron(base, Matrix::Identity(n, n))).norm();
  return {std::move(base), resid};
}

inline std::pair<Matrix, double> extract_right_base(const Superoperator& s) {
  const Index n = s.dim;
  Matrix base(n, n);  // this is sigmaᵀ
  for (Index j = 0; j < n; ++j)
    for (Index l = 0; l < n; ++l) {
      Complex acc = 0;
      for (Index i = 0; i < n; ++i) acc += s.matrix(i * n + j, i * n + l);
      base(j, l) = acc / static_cast<double>(n);
    }
  const double resid = (s.matrix - kron(Matrix::Identity(n, n), base)).norm();
  return {std::move(base), resid};
}

inline void require_support(const Matrix& rho, const Matrix& support, const ToleranceConfig& tol,
                            const char* what) {
  const Index n = rho.rows();
  const double escaped = ((Matrix::Identity(n, n) - support) * rho).trace().real();
  const double budget = tol.psd_tol * std::max(1.0, std::abs(rho.trace().real()));
  if (escaped > budget)
    throw SupportViolationError(std::string(what) + ": mass " + short_str(escaped) +
                                " outside the required support");
}

}  // namespace detail

// log of a left (right) multiplication superoperator is left (right)
// multiplication by the support-restricted log of the base matrix. Inputs of
// any other structure are rejected.
inline Superoperator superop_log(const Superoperator& s, const ToleranceConfig& tol = {}) {
  const Index n = s.dim;
  if (n < 1 || s.matrix.rows() != n * n || s.matrix.cols() != n * n)
    throw DimensionError("superop_log: matrix must be n²×n² with n = dim");
  auto [left_base, left_resid] = detail::extract_left_base(s);
  auto [right_base, right_resid] = detail::extract_right_base(s);
  const double threshold = tol.match_tol * std::max(1.0, s.matrix.norm());
  if (left_resid <= right_resid && left_resid <= threshold)
    return {kron(support_log(left_base, tol).log, Matrix::Identity(n, n)), n};
  if (right_resid < left_resid && right_resid <= threshold)
    // base is sigmaᵀ and log commutes with transposition, so this is
    // kron(I, log(sigma)ᵀ)
    return {kron(Matrix::Identity(n, n), support_log(right_base, tol).log), n};
  throw ConfigError("superop_log: input is not a left or right multiplication superoperator");
}

// --------------------------------------------------- operator convex f(x) --

// Scalar operator convex functions together with the limit rules their
// perspectives need at zero eigenvalues: perspective_value(lam, mu) evaluates
// g(lam, mu) = f(lam/mu)·mu, maps the (0,0) block to 0, and rejects pairs
// where the limit is infinite.
class OperatorConvexF {
 public:
  enum class Kind { XLogX, NegLog, Square, Power };

  static OperatorConvexF xlogx() { return {Kind::XLogX, 0.0, "xlogx"}; }
  static OperatorConvexF neglog() { return {Kind::NegLog, 0.0, "neglog"}; }
  static OperatorConvexF square() { return {Kind::Square, 0.0, "square"}; }
  static OperatorConvexF power(double t) {
    if (!(t > 1.0 && t <= 2.0)) throw ConfigError("power exponent must lie in (1,2]");
    char buf[40];
    std::snprintf(buf, sizeof buf, "power(%g)", t);
    return {Kind::Power, t, buf};
  }

  static OperatorConvexF from_name(const std::string& name) {
    if (name == "xlogx") return xlogx();
    if (name == "neglog") return neglog();
    if (name == "square") return square();
    if (name.rfind("power(", 0) == 0 && name.back() == ')')
      return power(std::stod(name.substr(6, name.size() - 7)));
    throw ConfigError("unknown operator convex function: " + name);
  }

  // f(x) for x > 0
  double scalar(double x) const {
    switch (kind_) {
      case Kind::XLogX: return x * std::log(x);
      case Kind::NegLog: return -std::log(x);
      case Kind::Square: return x * x;
      case Kind::Power: return std::pow(x, exponent_);
    }
    return 0.0;
  }

  double perspective_value(double lam, double mu) const {
    if (lam < 0.0 || mu < 0.0)
      throw PositivityError("perspective_value: negative eigenvalue");
    switch (kind_) {
      case Kind::XLogX:
        if (lam == 0.0) return 0.0;
        if (mu == 0.0) break;
        return lam * (std::log(lam) - std::log(mu));
      case Kind::NegLog:
        if (mu == 0.0) return 0.0;
        if (lam == 0.0) break;
        return mu * (std::log(mu) - std::log(lam));
      case Kind::Square:
        if (lam == 0.0) return 0.0;
        if (mu == 0.0) break;
        return lam * lam / mu;
      case Kind::Power:
        if (lam == 0.0) return 0.0;
        if (mu == 0.0) break;
        return std::pow(lam, exponent_) * std::pow(mu, 1.0 - exponent_);
    }
    throw SupportViolationError("perspective of " + name_ + " undefined at (" + short_str(lam) +
                                ", " + short_str(mu) + ")");
  }

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  const std::string& name() const { return name_; }

 private:
  OperatorConvexF(Kind k, double e, std::string n) : kind_(k), exponent_(e), name_(std::move(n)) {}

  Kind kind_;
  double exponent_;
  std::string name_;
};

// ------------------------------------------------------------ perspectives --

// g(L,R) = L·log L − L·log R assembled from support-restricted logs:
// apply(g, X) = rho·log(rho)·X − rho·X·log(sigma). Requires the support of
// rho to lie inside the support of sigma.
inline Superoperator perspective_xlogx(const Matrix& rho, const Matrix& sigma,
                                       const ToleranceConfig& tol = {}) {
  if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows())
    throw DimensionError("perspective_xlogx: inputs must be square and equal-sized");
  const Index n = rho.rows();
  SupportLog log_rho = support_log(rho, tol);
  SupportLog log_sigma = support_log(sigma, tol);
  detail::require_support(rho, log_sigma.support, tol, "perspective_xlogx");
  Matrix rho_log_rho = rho * log_rho.log;
  rho_log_rho = 0.5 * (rho_log_rho + rho_log_rho.adjoint());  // commuting product, clean roundoff
  return {kron(rho_log_rho, Matrix::Identity(n, n)) - kron(rho, log_sigma.log.transpose()), n};
}

// ⟨g(O), O⟩ under the Frobenius inner product.
inline Complex quasi_entropy_form(const Superoperator& g, const Matrix& o) {
  return frobenius_inner(g.apply(o), o);
}

// Quasi-entropy through the superoperator path. O = I gives the relative
// entropy D(rho‖sigma).
inline double quasi_entropy(const Matrix& rho, const Matrix& sigma, const Matrix& o,
                            const ToleranceConfig& tol = {}) {
  const Complex q = quasi_entropy_form(perspective_xlogx(rho, sigma, tol), o);
  if (std::abs(q.imag()) > tol.match_tol * std::max(1.0, std::abs(q.real())))
    throw HermiticityError("quasi_entropy: non-real value, imag " + short_str(q.imag()));
  return q.real();
}

// Same quantity from Tr(rho·log rho·O·O† − rho·O·log sigma·O†) with plain
// matrix products, bypassing the superoperator representation entirely.
inline double quasi_entropy_direct(const Matrix& rho, const Matrix& sigma, const Matrix& o,
                                   const ToleranceConfig& tol = {}) {
  if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows())
    throw DimensionError("quasi_entropy_direct: inputs must be square and equal-sized");
  SupportLog log_rho = support_log(rho, tol);
  SupportLog log_sigma = support_log(sigma, tol);
  detail::require_support(rho, log_sigma.support, tol, "quasi_entropy_direct");
  const Complex q = (rho * log_rho.log * o * o.adjoint()).trace() -
                    (rho * o * log_sigma.log * o.adjoint()).trace();
  return q.real();
}

// g(L,R) = f(L/R)·R assembled in the joint eigenbasis: the superoperator
// eigenvector |u_i⟩⟨v_j| (vectorized: u_i ⊗ conj(v_j)) carries eigenvalue
// f(lam_i/mu_j)·mu_j under the zero-eigenvalue rules of `f`. Never inverts R.
inline Superoperator perspective_general(const OperatorConvexF& f, const Matrix& rho,
                                         const Matrix& sigma, const ToleranceConfig& tol = {}) {
  if (rho.rows() != rho.cols() || sigma.rows() != sigma.cols() || rho.rows() != sigma.rows())
    throw DimensionError("perspective_general: inputs must be square and equal-sized");
  const Index n = rho.rows();
  auto eig = [&](const Matrix& m, const char* what) {
    const double scale = m.norm();
    if (0.5 * (m - m.adjoint()).norm() > tol.hermiticity_tol * std::max(1.0, scale))
      throw HermiticityError(std::string(what) + ": input not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success) throw SolverError(std::string(what) + ": eigensolver failed");
    Eigen::VectorXd lam = es.eigenvalues();
    if (lam(0) < -tol.psd_slack(scale))
      throw PositivityError(std::string(what) + ": eigenvalue below PSD slack");
    const double cutoff = tol.support_cutoff_rel * std::max(lam(n - 1), 0.0);
    for (Index i = 0; i < n; ++i)
      if (!(lam(i) > cutoff && lam(i) > 0.0)) lam(i) = 0.0;
    return std::make_pair(std::move(lam), Matrix(es.eigenvectors()));
  };
  auto [lam, u] = eig(rho, "perspective_general(rho)");
  auto [mu, v] = eig(sigma, "perspective_general(sigma)");
  Eigen::VectorXd gvals(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) gvals(i * n + j) = f.perspective_value(lam(i), mu(j));
  Matrix w = kron(u, v.conjugate());
  Matrix g = w * gvals.cast<Complex>().asDiagonal() * w.adjoint();
  return {0.5 * (g + g.adjoint()), n};
}

// ---------------------------------------------------------- joint convexity --

struct ConvexPair {
  Matrix rho;
  Matrix sigma;
};

namespace detail {

// c·a + (1−c)·b as the stable lerp: exact at the endpoints and exact when
// a == b, so degenerate mixtures do not pick up rounding that the
// ill-conditioned corners of the quasi-entropy form would amplify.
inline Matrix convex_mix(double c, const Matrix& a, const Matrix& b) {
  if (c <= 0.5) return b + c * (a - b);
  return a + (1.0 - c) * (b - a);
}

}  // namespace detail

// margin = c·Q(rho1,sigma1) + (1−c)·Q(rho2,sigma2) − Q(mixed pair), where Q
// is the quasi-entropy form of `f`. Nonnegative, up to roundoff, for operator
// convex f.
inline double joint_convexity_trial(const ConvexPair& p1, const ConvexPair& p2, double c,
                                    const Matrix& o, const OperatorConvexF& f,
                                    const ToleranceConfig& tol = {}) {
  if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("joint_convexity_trial: weight must lie in [0,1]");
  auto q = [&](const Matrix& r, const Matrix& s) {
    return quasi_entropy_form(perspective_general(f, r, s, tol), o).real();
  };
  const double q1 = q(p1.rho, p1.sigma);
  const double q2 = q(p2.rho, p2.sigma);
  Matrix rho_mix = detail::convex_mix(c, p1.rho, p2.rho);
  Matrix sigma_mix = detail::convex_mix(c, p1.sigma, p2.sigma);
  const double qm = q(rho_mix, sigma_mix);
  return c * q1 + (1.0 - c) * q2 - qm;
}

}  // namespace opssa
