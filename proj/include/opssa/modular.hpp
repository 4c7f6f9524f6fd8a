// modular.hpp — Modular Hamiltonians of reduced states, the operator
// strengthening of strong subadditivity, conditional mutual information,
// the A-factor twirl, the projector-form inequality, and the Hermiticity
// witness for traces restricted to A or B.

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "states.hpp"
#include "tensor.hpp"

namespace opssa {

// H_S = -log(rho_S) ⊗ I on the complement, with the support-restricted log.
inline HermitianOperator modular_hamiltonian(const DensityMatrix& rho,
                                             std::vector<int> subsystems,
                                             const ToleranceConfig& tol = {}) {
  std::sort(subsystems.begin(), subsystems.end());
  if (subsystems.empty()) throw DimensionError("modular_hamiltonian: empty subsystem set");
  check_subsystems(subsystems, rho.dims.count());
  Matrix marg = partial_trace(rho.matrix, rho.dims, complement_of(subsystems, rho.dims.count()));
  SupportLog sl = support_log(marg, tol);
  Matrix h = embed(-sl.log, rho.dims, subsystems);
  return {std::move(h), rho.dims, 0.0};
}

namespace detail {

// K = H_AB + H_BC - H_B - H_ABC. The off-support mass of every marginal is
// checked so a formal log never hides a diverging term.
inline Matrix ssa_combination(const DensityMatrix& rho, const ToleranceConfig& tol) {
  if (rho.dims.count() != 3)
    throw DimensionError("expected a tripartite state, got dims " + rho.dims.to_string());
  struct Term {
    std::vector<int> subsystems;
    double sign;
    const char* name;
  };
  const Term terms[] = {{{0, 1}, +1.0, "AB"},
                        {{1, 2}, +1.0, "BC"},
                        {{1}, -1.0, "B"},
                        {{0, 1, 2}, -1.0, "ABC"}};
  Matrix k = Matrix::Zero(rho.side(), rho.side());
  for (const auto& term : terms) {
    Matrix marg = partial_trace(rho.matrix, rho.dims, complement_of(term.subsystems, 3));
    SupportLog sl = support_log(marg, tol);
    if (sl.off_support_mass > tol.psd_tol)
      throw SupportViolationError(std::string("marginal ") + term.name +
                                  " carries off-support mass " + short_str(sl.off_support_mass));
    // H_S = embed(-log rho_S), entering with `sign`
    k -= term.sign * embed(sl.log, rho.dims, term.subsystems);
  }
  return k;
}

}  // namespace detail

// T_C = hermitized Tr_AB(rho (H_AB + H_BC - H_B - H_ABC)), an operator on C
// whose trace is the conditional mutual information I(A:C|B).
inline HermitianOperator ssa_operator(const DensityMatrix& rho, const ToleranceConfig& tol = {}) {
  Matrix k = detail::ssa_combination(rho, tol);
  Matrix t_raw = partial_trace(rho.matrix * k, rho.dims, {0, 1});
  HermitianOperator t = hermitize(std::move(t_raw), DimList{rho.dims[2]});
  if (t.defect > tol.hermiticity_tol)
    throw HermiticityError("ssa_operator: hermitization defect " + short_str(t.defect));
  return t;
}

// I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC).
inline double conditional_mutual_information(const DensityMatrix& rho,
                                             const ToleranceConfig& tol = {}) {
  if (rho.dims.count() != 3)
    throw DimensionError("conditional_mutual_information: expected a tripartite state");
  auto marginal_entropy = [&](const std::vector<int>& keep) {
    return von_neumann_entropy(partial_trace(rho.matrix, rho.dims, complement_of(keep, 3)), tol);
  };
  return marginal_entropy({0, 1}) + marginal_entropy({1, 2}) - marginal_entropy({1}) -
         von_neumann_entropy(rho.matrix, tol);
}

// (1/d_A²) Σ_i (U_i ⊗ I) rho (U_i ⊗ I)† over the Weyl basis on A. Projects
// the A factor onto the maximally mixed state: the result is I/d_A ⊗ rho_BC.
inline DensityMatrix twirl_A(const DensityMatrix& rho, const ToleranceConfig& tol = {}) {
  if (rho.dims.count() != 3) throw DimensionError("twirl_A: expected a tripartite state");
  const Index da = rho.dims[0];
  const UnitaryBasis basis = weyl_basis(da);
  Matrix acc = Matrix::Zero(rho.side(), rho.side());
  for (const Matrix& u : basis.elements) {
    Matrix full = embed(u, rho.dims, {0});
    acc += full * rho.matrix * full.adjoint();
  }
  acc /= static_cast<double>(da * da);
  return {0.5 * (acc + acc.adjoint()), rho.dims, tol};
}

// Both sides of the projector-form inequality
//   Tr((I_A/d_A ⊗ rho_BC)(H_B - H_BC) P_C)  <=  Tr(rho (H_AB - H_ABC) P_C),
// plus the algebraic rewrite of the left side with rho in place of the
// twirled state, which must coincide with lhs.
struct ProofStepResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_alt = 0.0;      // Tr(rho (H_B - H_BC) P_C)
  double imag_defect = 0.0;  // largest imaginary magnitude among the traces
  double margin() const { return rhs - lhs; }
  double lhs_consistency_gap() const { return std::abs(lhs - lhs_alt); }
};

inline ProofStepResult proof_step_check(const DensityMatrix& rho, const Matrix& p_c,
                                        const ToleranceConfig& tol = {}) {
  if (rho.dims.count() != 3) throw DimensionError("proof_step_check: expected a tripartite state");
  const Index dc = rho.dims[2];
  if (p_c.rows() != dc || p_c.cols() != dc)
    throw DimensionError("proof_step_check: projector must act on C (side " + std::to_string(dc) + ")");
  const double p_scale = std::max(1.0, p_c.norm());
  if ((p_c - p_c.adjoint()).norm() > tol.match_tol * p_scale ||
      (p_c * p_c - p_c).norm() > tol.match_tol * p_scale)
    throw ConfigError("proof_step_check: input is not a projector");

  auto ham = [&](std::vector<int> s) { return modular_hamiltonian(rho, std::move(s), tol).matrix; };
  const Matrix h_b = ham({1});
  const Matrix h_bc = ham({1, 2});
  const Matrix h_ab = ham({0, 1});
  const Matrix h_abc = ham({0, 1, 2});

  const Index da = rho.dims[0];
  Matrix rho_bc = partial_trace(rho.matrix, rho.dims, {0});
  Matrix tau = kron(Matrix::Identity(da, da) / static_cast<double>(da), rho_bc);
  Matrix obs = embed(p_c, rho.dims, {2});

  const Complex l = (tau * (h_b - h_bc) * obs).trace();
  const Complex r = (rho.matrix * (h_ab - h_abc) * obs).trace();
  const Complex la = (rho.matrix * (h_b - h_bc) * obs).trace();
  ProofStepResult out;
  out.lhs = l.real();
  out.rhs = r.real();
  out.lhs_alt = la.real();
  out.imag_defect = std::max({std::abs(l.imag()), std::abs(r.imag()), std::abs(la.imag())});
  return out;
}

// Which partial trace of rho·K to take: the full AB-trace of the main
// inequality (operator on C), or its restriction to A or B alone (operators
// on BC and AC).
enum class TraceCut { A, B, AB };

inline const char* to_string(TraceCut cut) {
  switch (cut) {
    case TraceCut::A: return "A";
    case TraceCut::B: return "B";
    case TraceCut::AB: return "AB";
  }
  return "?";
}

// Partial trace of rho·K, deliberately NOT hermitized. The AB cut is T_C up
// to roundoff (every term is a commuting product or acts only on traced
// factors). Restricting the trace to A or B leaves modular terms straddling
// the traced/kept boundary, and the result is generically non-Hermitian.
struct RestrictedTraceWitness {
  Matrix op;
  double defect = 0.0;  // ‖op - op†‖_F
};

inline RestrictedTraceWitness restricted_trace_witness(const DensityMatrix& rho, TraceCut cut,
                                                       const ToleranceConfig& tol = {}) {
  Matrix k = detail::ssa_combination(rho, tol);
  std::vector<int> traced;
  switch (cut) {
    case TraceCut::A: traced = {0}; break;
    case TraceCut::B: traced = {1}; break;
    case TraceCut::AB: traced = {0, 1}; break;
  }
  Matrix x = partial_trace(rho.matrix * k, rho.dims, traced);
  const double defect = (x - x.adjoint()).norm();
  return {std::move(x), defect};
}

}  // namespace opssa
