// states.hpp — Random and named tripartite states, random projectors, the
// Weyl clock-shift unitary basis, and the on-disk state format.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace opssa {

enum class StateKind {
  HaarPure,
  InducedMixed,
  ProductAB_C,
  ProductA_BC,
  ClassicalDiagonal,
  Ghz,
  MaximallyMixed,
  File,
};

inline const char* to_string(StateKind k) {
  switch (k) {
    case StateKind::HaarPure: return "haar-pure";
    case StateKind::InducedMixed: return "induced-mixed";
    case StateKind::ProductAB_C: return "product-AB-C";
    case StateKind::ProductA_BC: return "product-A-BC";
    case StateKind::ClassicalDiagonal: return "classical-diagonal";
    case StateKind::Ghz: return "ghz";
    case StateKind::MaximallyMixed: return "maximally-mixed";
    case StateKind::File: return "file";
  }
  return "?";
}

inline StateKind state_kind_from_string(const std::string& s) {
  for (StateKind k : {StateKind::HaarPure, StateKind::InducedMixed, StateKind::ProductAB_C,
                      StateKind::ProductA_BC, StateKind::ClassicalDiagonal, StateKind::Ghz,
                      StateKind::MaximallyMixed, StateKind::File})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown state kind: " + s);
}

struct StateSpec {
  StateKind kind = StateKind::HaarPure;
  DimList dims;
  std::uint64_t seed = 0;
  int rank = 0;       // induced-mixed ancilla rank; 0 means full
  std::string path;   // kind == File
};

// Mixed state from the induced measure: Haar pure state on system x ancilla
// with the ancilla traced out, which is G G†/Tr(G G†) for a Gaussian G.
// Returns a raw matrix; callers wrap it in DensityMatrix.
inline Matrix random_density(Rng& rng, Index n, Index rank) {
  Matrix g = gaussian_matrix(rng, n, rank);
  Matrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return rho;
}

// ------------------------------------------------------------- state file --

// Single-object JSON: {"dims":[...],"matrix":[[re,im],...]} with the matrix
// row-major and reals printed with 17 significant digits (round-trip exact).
inline void write_state(std::ostream& os, const DensityMatrix& state) {
  os << "{\"dims\":[";
  for (int i = 0; i < state.dims.count(); ++i) {
    if (i) os << ',';
    os << state.dims[i];
  }
  os << "],\"matrix\":[";
  const Index n = state.side();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i || j) os << ',';
      const Complex v = state.matrix(i, j);
      os << '[' << format_real17(v.real()) << ',' << format_real17(v.imag()) << ']';
    }
  os << "]}\n";
}

inline DensityMatrix read_state(std::istream& is, const ToleranceConfig& tol = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("matrix"))
    throw ConfigError("state file: expected an object with 'dims' and 'matrix'");
  std::vector<int> dims;
  for (const auto& d : doc["dims"]) {
    if (!d.is_number_integer()) throw ConfigError("state file: dims must be integers");
    dims.push_back(d.get<int>());
  }
  DimList dl(std::move(dims));
  const Index n = dl.total();
  const auto& entries = doc["matrix"];
  if (!entries.is_array() || static_cast<Index>(entries.size()) != n * n)
    throw ConfigError("state file: matrix must hold " + std::to_string(n * n) + " [re,im] pairs");
  Matrix m(n, n);
  Index flat = 0;
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ConfigError("state file: matrix entries must be [re,im] pairs");
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw ConfigError("state file: non-finite matrix entry");
    m(flat / n, flat % n) = Complex(re, im);
    ++flat;
  }
  return DensityMatrix(std::move(m), std::move(dl), tol);
}

inline void save_state(const DensityMatrix& state, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open state file for writing: " + path);
  write_state(os, state);
  if (!os) throw ConfigError("failed writing state file: " + path);
}

inline DensityMatrix load_state(const std::string& path, const ToleranceConfig& tol = {}) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open state file: " + path);
  return read_state(is, tol);
}

// -------------------------------------------------------------- generator --

inline DensityMatrix generate(const StateSpec& spec, const ToleranceConfig& tol = {}) {
  const Index n = spec.dims.total();
  Rng rng(spec.seed);
  switch (spec.kind) {
    case StateKind::HaarPure: {
      Vector psi = gaussian_vector(rng, n);
      psi /= psi.norm();
      Matrix rho = psi * psi.adjoint();
      return {0.5 * (rho + rho.adjoint()), spec.dims, tol};
    }
    case StateKind::InducedMixed: {
      const Index r = spec.rank == 0 ? n : spec.rank;
      if (r < 1 || r > n)
        throw ConfigError("induced-mixed: rank " + std::to_string(r) +
                          " out of range [1," + std::to_string(n) + "]");
      return {random_density(rng, n, r), spec.dims, tol};
    }
    case StateKind::ProductAB_C: {
      if (spec.dims.count() != 3) throw ConfigError("product-AB-C needs three subsystems");
      const Index nab = spec.dims.total_of({0, 1});
      Matrix ab = random_density(rng, nab, nab);
      Matrix c = random_density(rng, spec.dims[2], spec.dims[2]);
      return {kron(ab, c), spec.dims, tol};
    }
    case StateKind::ProductA_BC: {
      if (spec.dims.count() != 3) throw ConfigError("product-A-BC needs three subsystems");
      Matrix a = random_density(rng, spec.dims[0], spec.dims[0]);
      const Index nbc = spec.dims.total_of({1, 2});
      Matrix bc = random_density(rng, nbc, nbc);
      return {kron(a, bc), spec.dims, tol};
    }
    case StateKind::ClassicalDiagonal: {
      // flat Dirichlet weights on the product basis
      Eigen::VectorXd p(n);
      for (Index i = 0; i < n; ++i) p(i) = -std::log(rng.uniform_open());
      p /= p.sum();
      Matrix rho = p.cast<Complex>().asDiagonal();
      return {std::move(rho), spec.dims, tol};
    }
    case StateKind::Ghz: {
      const int d = spec.dims.count() ? spec.dims[0] : 0;
      for (int i = 0; i < spec.dims.count(); ++i)
        if (spec.dims[i] != d) throw ConfigError("ghz requires equal subsystem dimensions");
      if (d < 1 || spec.dims.count() < 1) throw ConfigError("ghz: invalid dims");
      Vector psi = Vector::Zero(n);
      // |j,j,...,j> has flat index j * (1 + d + d^2 + ...) for equal factors
      Index diag_stride = 0;
      Index stride = 1;
      for (int f = 0; f < spec.dims.count(); ++f) {
        diag_stride += stride;
        stride *= d;
      }
      for (Index j = 0; j < d; ++j) psi(j * diag_stride) = 1.0 / std::sqrt(static_cast<double>(d));
      Matrix rho = psi * psi.adjoint();
      return {std::move(rho), spec.dims, tol};
    }
    case StateKind::MaximallyMixed:
      return {Matrix::Identity(n, n) / static_cast<double>(n), spec.dims, tol};
    case StateKind::File:
      return load_state(spec.path, tol);
  }
  throw ConfigError("generate: unhandled state kind");
}

// -------------------------------------------------- unitaries & projectors --

// Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal phases
// folded back in.
inline Matrix random_unitary(Index d, Rng& rng) {
  Matrix g = gaussian_matrix(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < d; ++i) {
    const Complex rii = r(i, i);
    const double a = std::abs(rii);
    q.col(i) *= a > 0.0 ? rii / a : Complex(1.0, 0.0);
  }
  return q;
}

inline Matrix random_projector(Index d, Index rank, std::uint64_t seed) {
  if (rank < 1 || rank > d)
    throw ConfigError("random_projector: rank " + std::to_string(rank) + " out of range [1," +
                      std::to_string(d) + "]");
  Rng rng(seed);
  Matrix u = random_unitary(d, rng);
  Matrix p = u.leftCols(rank) * u.leftCols(rank).adjoint();
  return 0.5 * (p + p.adjoint());
}

struct UnitaryBasis {
  Index dim = 0;
  std::vector<Matrix> elements;  // d^2 unitaries, Tr(U_i U_j†) = d δ_ij
};

// Clock-and-shift basis {X^a Z^b : a,b in 0..d-1} with X|j> = |j+1 mod d> and
// Z = diag(ω^j), ω = exp(2πi/d).
inline UnitaryBasis weyl_basis(Index d) {
  if (d < 1) throw ConfigError("weyl_basis: dimension must be >= 1");
  UnitaryBasis basis;
  basis.dim = d;
  basis.elements.reserve(static_cast<std::size_t>(d * d));
  const double theta = 2.0 * std::numbers::pi / static_cast<double>(d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) {
      Matrix u = Matrix::Zero(d, d);
      for (Index j = 0; j < d; ++j)
        u((j + a) % d, j) = std::polar(1.0, theta * static_cast<double>(b) * static_cast<double>(j));
      basis.elements.push_back(std::move(u));
    }
  return basis;
}

}  // namespace opssa
