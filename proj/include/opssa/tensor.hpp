// tensor.hpp — Dense tensor-product linear algebra: partial trace, subsystem
// embedding, support-restricted spectral logarithm, hermitization bookkeeping.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "core.hpp"

namespace opssa {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

// Ascending, duplicate-free subsystem indices in [0, count).
inline void check_subsystems(const std::vector<int>& subsystems, int count) {
  int prev = -1;
  for (int s : subsystems) {
    if (s < 0 || s >= count)
      throw DimensionError("subsystem index " + std::to_string(s) +
                           " out of range for " + std::to_string(count) + " factors");
    if (s <= prev)
      throw DimensionError("subsystem indices must be ascending and duplicate-free");
    prev = s;
  }
}

inline std::vector<int> complement_of(const std::vector<int>& subsystems, int count) {
  std::vector<int> comp;
  comp.reserve(static_cast<std::size_t>(count));
  std::size_t k = 0;
  for (int f = 0; f < count; ++f) {
    if (k < subsystems.size() && subsystems[k] == f) {
      ++k;
      continue;
    }
    comp.push_back(f);
  }
  return comp;
}

namespace detail {

// Flat-index offsets of every multi-index combination over `axes` (ascending,
// last axis fastest). A full flat index splits as offset(kept digits) +
// offset(traced digits); both the partial trace and the embedding loop over
// these two arrays.
inline std::vector<Index> axis_offsets(const DimList& dims, const std::vector<int>& axes) {
  std::vector<Index> stride(static_cast<std::size_t>(dims.count()), 1);
  Index acc = 1;
  for (int f = dims.count() - 1; f >= 0; --f) {
    stride[static_cast<std::size_t>(f)] = acc;
    acc *= dims[f];
  }
  Index n = 1;
  for (int a : axes) n *= dims[a];
  std::vector<Index> offsets(static_cast<std::size_t>(n), 0);
  std::vector<int> digit(axes.size(), 0);
  for (Index k = 0; k < n; ++k) {
    Index off = 0;
    for (std::size_t i = 0; i < axes.size(); ++i)
      off += static_cast<Index>(digit[i]) * stride[static_cast<std::size_t>(axes[i])];
    offsets[static_cast<std::size_t>(k)] = off;
    for (int i = static_cast<int>(axes.size()) - 1; i >= 0; --i) {
      if (++digit[static_cast<std::size_t>(i)] < dims[axes[static_cast<std::size_t>(i)]]) break;
      digit[static_cast<std::size_t>(i)] = 0;
    }
  }
  return offsets;
}

}  // namespace detail

// Trace out the factors listed in `traced`; kept factors stay in order.
// Preserves the total trace.
inline Matrix partial_trace(const Matrix& m, const DimList& dims, std::vector<int> traced) {
  if (m.rows() != m.cols()) throw DimensionError("partial_trace: matrix must be square");
  if (m.rows() != dims.total())
    throw DimensionError("partial_trace: matrix side " + std::to_string(m.rows()) +
                         " does not match dims " + dims.to_string());
  std::sort(traced.begin(), traced.end());
  check_subsystems(traced, dims.count());
  const auto kept = complement_of(traced, dims.count());
  const auto kb = detail::axis_offsets(dims, kept);
  const auto tb = detail::axis_offsets(dims, traced);
  const Index nk = static_cast<Index>(kb.size());
  const Index nt = static_cast<Index>(tb.size());
  Matrix out(nk, nk);
  for (Index i = 0; i < nk; ++i)
    for (Index j = 0; j < nk; ++j) {
      Complex acc = 0;
      for (Index t = 0; t < nt; ++t)
        acc += m(kb[static_cast<std::size_t>(i)] + tb[static_cast<std::size_t>(t)],
                 kb[static_cast<std::size_t>(j)] + tb[static_cast<std::size_t>(t)]);
      out(i, j) = acc;
    }
  return out;
}

// Place `op` on the factors in `where`, identity elsewhere.
inline Matrix embed(const Matrix& op, const DimList& dims, std::vector<int> where) {
  if (op.rows() != op.cols()) throw DimensionError("embed: operator must be square");
  std::sort(where.begin(), where.end());
  check_subsystems(where, dims.count());
  if (op.rows() != dims.total_of(where))
    throw DimensionError("embed: operator side " + std::to_string(op.rows()) +
                         " does not match selected factors of " + dims.to_string());
  const auto comp = complement_of(where, dims.count());
  const auto sb = detail::axis_offsets(dims, where);
  const auto cb = detail::axis_offsets(dims, comp);
  Matrix out = Matrix::Zero(dims.total(), dims.total());
  for (std::size_t i = 0; i < sb.size(); ++i)
    for (std::size_t j = 0; j < sb.size(); ++j) {
      const Complex v = op(static_cast<Index>(i), static_cast<Index>(j));
      if (v == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < cb.size(); ++k) out(sb[i] + cb[k], sb[j] + cb[k]) = v;
    }
  return out;
}

// Tr(X Y†). Conjugate-symmetric in its arguments.
inline Complex frobenius_inner(const Matrix& x, const Matrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionError("frobenius_inner: size mismatch");
  return (x.array() * y.array().conjugate()).sum();
}

// ------------------------------------------------------ Hermitian wrappers --

struct HermitianOperator {
  Matrix matrix;
  DimList dims;
  double defect = 0.0;  // Frobenius norm of the discarded anti-Hermitian part
};

inline HermitianOperator hermitize(const Matrix& m, DimList dims) {
  if (m.rows() != m.cols()) throw DimensionError("hermitize: matrix must be square");
  if (m.rows() != dims.total()) throw DimensionError("hermitize: dims do not match matrix side");
  Matrix h = 0.5 * (m + m.adjoint());
  const double defect = 0.5 * (m - m.adjoint()).norm();
  return {std::move(h), std::move(dims), defect};
}

inline HermitianOperator hermitize(const Matrix& m) {
  return hermitize(m, DimList{static_cast<int>(m.rows())});
}

inline double min_eigenvalue(const Matrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("min_eigenvalue: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("min_eigenvalue: eigensolver failed");
  return es.eigenvalues()(0);
}

inline double min_eigenvalue(const HermitianOperator& h) { return min_eigenvalue(h.matrix); }

// ------------------------------------------------------------ spectral log --

struct SupportLog {
  Matrix log;      // V diag(log lambda) V† on the retained eigenspace, zero on the kernel
  Matrix support;  // projector onto the retained eigenspace
  int rank = 0;
  double off_support_mass = 0.0;  // sum of |lambda| over eigenvalues below the cutoff
};

// Spectral logarithm with the 0·log 0 = 0 convention: eigenvalues above
// support_cutoff_rel·lambda_max map to log lambda, the rest are treated as
// exact kernel.
inline SupportLog support_log(const Matrix& rho, const ToleranceConfig& tol = {}) {
  if (rho.rows() != rho.cols()) throw DimensionError("support_log: matrix must be square");
  const double scale = rho.norm();
  const double herm_defect = 0.5 * (rho - rho.adjoint()).norm();
  if (herm_defect > tol.hermiticity_tol * std::max(1.0, scale))
    throw HermiticityError("support_log: input not Hermitian, defect " + short_str(herm_defect));
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  if (es.info() != Eigen::Success) throw SolverError("support_log: eigensolver failed");
  const auto& lam = es.eigenvalues();
  const auto& v = es.eigenvectors();
  const Index n = lam.size();
  if (lam(0) < -tol.psd_slack(scale))
    throw PositivityError("support_log: eigenvalue " + short_str(lam(0)) + " below PSD slack");
  const double cutoff = tol.support_cutoff_rel * std::max(lam(n - 1), 0.0);

  SupportLog out;
  Eigen::VectorXd logs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd keep = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) {
    if (lam(i) > cutoff && lam(i) > 0.0) {
      logs(i) = std::log(lam(i));
      keep(i) = 1.0;
      ++out.rank;
    } else {
      out.off_support_mass += std::abs(lam(i));
    }
  }
  Matrix l = v * logs.cast<Complex>().asDiagonal() * v.adjoint();
  Matrix p = v * keep.cast<Complex>().asDiagonal() * v.adjoint();
  out.log = 0.5 * (l + l.adjoint());
  out.support = 0.5 * (p + p.adjoint());
  return out;
}

// -Tr(rho log rho) evaluated in the eigenbasis, same support cutoff as
// support_log.
inline double von_neumann_entropy(const Matrix& rho, const ToleranceConfig& tol = {}) {
  if (rho.rows() != rho.cols()) throw DimensionError("von_neumann_entropy: matrix must be square");
  const double scale = rho.norm();
  const double herm_defect = 0.5 * (rho - rho.adjoint()).norm();
  if (herm_defect > tol.hermiticity_tol * std::max(1.0, scale))
    throw HermiticityError("von_neumann_entropy: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("von_neumann_entropy: eigensolver failed");
  const auto& lam = es.eigenvalues();
  const Index n = lam.size();
  if (lam(0) < -tol.psd_slack(scale))
    throw PositivityError("von_neumann_entropy: eigenvalue below PSD slack");
  const double cutoff = tol.support_cutoff_rel * std::max(lam(n - 1), 0.0);
  double s = 0.0;
  for (Index i = 0; i < n; ++i)
    if (lam(i) > cutoff && lam(i) > 0.0) s -= lam(i) * std::log(lam(i));
  return s;
}

// ----------------------------------------------------------- DensityMatrix --

// Hermitian, PSD, unit-trace matrix tagged with its tensor-factor split.
// Construction validates all three invariants and stores the hermitized
// matrix, so downstream spectral calls can assume exact self-adjointness.
struct DensityMatrix {
  Matrix matrix;
  DimList dims;

  DensityMatrix(Matrix m, DimList d, const ToleranceConfig& tol = {})
      : matrix(std::move(m)), dims(std::move(d)) {
    if (matrix.rows() != matrix.cols()) throw DimensionError("DensityMatrix: matrix must be square");
    if (matrix.rows() != dims.total())
      throw DimensionError("DensityMatrix: matrix side " + std::to_string(matrix.rows()) +
                           " does not match dims " + dims.to_string());
    const double scale = matrix.norm();
    const double defect = 0.5 * (matrix - matrix.adjoint()).norm();
    if (defect > tol.hermiticity_tol * std::max(1.0, scale))
      throw HermiticityError("DensityMatrix: hermiticity defect " + short_str(defect));
    matrix = 0.5 * (matrix + matrix.adjoint());
    const double trace_gap = std::abs(matrix.trace() - Complex(1.0, 0.0));
    if (trace_gap > tol.match_tol)
      throw StateError("DensityMatrix: trace deviates from 1 by " + short_str(trace_gap));
    const double mineig = min_eigenvalue(matrix);
    if (mineig < -tol.psd_slack(scale))
      throw PositivityError("DensityMatrix: negative eigenvalue " + short_str(mineig));
  }

  Index side() const { return matrix.rows(); }
};

}  // namespace opssa
