// ghz_walkthrough — builds the GHZ state on three qubits, prints the modular
// combination, the operator T_C with its spectrum, the conditional mutual
// information, and a joint-convexity margin for x log x.

#include <iostream>

#include "opssa/opssa.hpp"

int main() {
  using namespace opssa;

  StateSpec spec;
  spec.kind = StateKind::Ghz;
  spec.dims = DimList{2, 2, 2};
  const DensityMatrix ghz = generate(spec);

  const HermitianOperator t_c = ssa_operator(ghz);
  std::cout << "T_C for the GHZ state (expected (log 2 / 2) * I):\n"
            << t_c.matrix << "\n\n";
  std::cout << "min eigenvalue : " << min_eigenvalue(t_c) << "\n";
  std::cout << "trace          : " << t_c.matrix.trace().real() << "\n";
  std::cout << "I(A:C|B)       : " << conditional_mutual_information(ghz) << "\n";
  std::cout << "log 2          : " << std::log(2.0) << "\n\n";

  const DensityMatrix twirled = twirl_A(ghz);
  Matrix target = kron(Matrix::Identity(2, 2) / 2.0, partial_trace(ghz.matrix, ghz.dims, {0}));
  std::cout << "twirl residual : " << (twirled.matrix - target).norm() << "\n";

  Rng rng(41);
  ConvexPair p1{random_density(rng, 3, 3), random_density(rng, 3, 3)};
  ConvexPair p2{random_density(rng, 3, 3), random_density(rng, 3, 3)};
  Matrix o = gaussian_matrix(rng, 3, 3);
  const double margin =
      joint_convexity_trial(p1, p2, 0.37, o, OperatorConvexF::xlogx());
  std::cout << "joint-convexity margin (x log x, n = 3): " << margin << "\n";
  return 0;
}
