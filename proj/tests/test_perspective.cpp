#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "opssa/perspective.hpp"
#include "opssa/rng.hpp"
#include "opssa/states.hpp"
#include "oracles.hpp"

using namespace opssa;
using Catch::Approx;

namespace {

Matrix psd(std::uint64_t seed, Index n, Index rank) {
  Rng rng(seed);
  return random_density(rng, n, rank);
}

Matrix ginibre(std::uint64_t seed, Index n) {
  Rng rng(seed);
  return gaussian_matrix(rng, n, n);
}

const std::array<OperatorConvexF, 4> kFunctions = {
    OperatorConvexF::xlogx(), OperatorConvexF::neglog(), OperatorConvexF::square(),
    OperatorConvexF::power(1.5)};

}  // namespace

TEST_CASE("vectorize: row-major convention and round trip") {
  Matrix x(2, 2);
  x << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
  Vector v = vectorize(x);
  REQUIRE(v(0) == Complex(1, 0));  // (0,0) -> 0
  REQUIRE(v(1) == Complex(2, 0));  // (0,1) -> 1 = 0*n + 1
  REQUIRE(v(2) == Complex(3, 0));  // (1,0) -> 2 = 1*n + 0
  REQUIRE(v(3) == Complex(4, 0));
  REQUIRE((devectorize(v, 2) - x).norm() == 0.0);

  Matrix y = ginibre(5, 4);
  REQUIRE((devectorize(vectorize(y), 4) - y).norm() == 0.0);
  REQUIRE_THROWS_AS(devectorize(Vector::Zero(5), 2), DimensionError);
}

TEST_CASE("left/right superoperators: identity base gives the identity map") {
  Superoperator l = left_superop(Matrix::Identity(3, 3));
  REQUIRE((l.matrix - Matrix::Identity(9, 9)).norm() < 1e-15);
  Superoperator r = right_superop(Matrix::Identity(3, 3));
  REQUIRE((r.matrix - Matrix::Identity(9, 9)).norm() < 1e-15);
}

TEST_CASE("left/right superoperators: apply matches direct multiplication") {
  Matrix rho = ginibre(11, 4);
  Matrix sigma = ginibre(12, 4);
  Superoperator l = left_superop(rho);
  Superoperator r = right_superop(sigma);
  for (std::uint64_t seed : {13, 14, 15}) {
    Matrix x = ginibre(seed, 4);
    REQUIRE((l.apply(x) - rho * x).norm() < 1e-13);
    REQUIRE((r.apply(x) - x * sigma).norm() < 1e-13);
  }
  // and on every matrix unit, which spans the whole operator space
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      Matrix e_ij = Matrix::Zero(4, 4);
      e_ij(i, j) = 1.0;
      REQUIRE((l.apply(e_ij) - rho * e_ij).norm() < 1e-13);
      REQUIRE((r.apply(e_ij) - e_ij * sigma).norm() < 1e-13);
    }
  REQUIRE_THROWS_AS(l.apply(Matrix::Identity(3, 3)), DimensionError);
  REQUIRE_THROWS_AS(left_superop(Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("left/right superoperators: always commute") {
  for (std::uint64_t seed : {21, 22, 23}) {
    Matrix rho = psd(seed, 3, 3);
    Matrix sigma = psd(seed + 100, 3, 3);
    Superoperator l = left_superop(rho);
    Superoperator r = right_superop(sigma);
    REQUIRE((l.matrix * r.matrix - r.matrix * l.matrix).norm() < 1e-13);
  }
}

TEST_CASE("superop_log: identity base maps to the zero superoperator") {
  Superoperator log_l = superop_log(left_superop(Matrix::Identity(4, 4)));
  REQUIRE(log_l.matrix.norm() < 1e-12);
}

TEST_CASE("superop_log: flat qubit state acts as -log(2) times identity") {
  Matrix rho = 0.5 * Matrix::Identity(2, 2);
  Superoperator log_l = superop_log(left_superop(rho));
  Matrix x = ginibre(31, 2);
  REQUIRE((log_l.apply(x) + std::log(2.0) * x).norm() < 1e-13);
}

TEST_CASE("superop_log: left logs act by the spectral log of the base") {
  Matrix rho = psd(33, 3, 3);
  Matrix log_ref = oracle::log_psd_naive(rho);
  Superoperator log_l = superop_log(left_superop(rho));
  for (std::uint64_t seed : {34, 35}) {
    Matrix x = ginibre(seed, 3);
    REQUIRE((log_l.apply(x) - log_ref * x).norm() < 1e-11);
  }
  for (Index i = 0; i < 3; ++i)  // matrix-unit basis
    for (Index j = 0; j < 3; ++j) {
      Matrix e_ij = Matrix::Zero(3, 3);
      e_ij(i, j) = 1.0;
      REQUIRE((log_l.apply(e_ij) - log_ref * e_ij).norm() < 1e-11);
    }
}

TEST_CASE("superop_log: right logs act from the right") {
  Matrix sigma = psd(36, 3, 3);
  Matrix log_ref = oracle::log_psd_naive(sigma);
  Superoperator log_r = superop_log(right_superop(sigma));
  Matrix x = ginibre(37, 3);
  REQUIRE((log_r.apply(x) - x * log_ref).norm() < 1e-11);
}

TEST_CASE("superop_log: rejects non-multiplication superoperators") {
  Matrix rho = psd(38, 2, 2);
  Matrix sigma = psd(39, 2, 2);
  Superoperator mixed{left_superop(rho).matrix + right_superop(sigma).matrix -
                          Matrix::Identity(4, 4),
                      2};
  REQUIRE_THROWS_AS(superop_log(mixed), ConfigError);
  // a left superoperator of a non-PSD base propagates the positivity error
  Matrix indef = Matrix::Identity(2, 2);
  indef(1, 1) = -1.0;
  REQUIRE_THROWS_AS(superop_log(left_superop(indef)), PositivityError);
}

TEST_CASE("perspective_xlogx: self-relative entropy vanishes") {
  Matrix rho = psd(41, 3, 3);
  REQUIRE(std::abs(quasi_entropy(rho, rho, Matrix::Identity(3, 3))) < 1e-12);
}

TEST_CASE("perspective_xlogx: pure state against the flat state gives log d") {
  for (Index d : {2, 4, 5}) {
    Matrix pure = Matrix::Zero(d, d);
    pure(0, 0) = 1.0;
    Matrix flat = Matrix::Identity(d, d) / double(d);
    const double val = quasi_entropy(pure, flat, Matrix::Identity(d, d));
    REQUIRE(val == Approx(std::log(double(d))).margin(1e-10));
  }
}

TEST_CASE("perspective_xlogx: Hermitian with respect to the Frobenius inner product") {
  Matrix rho = psd(43, 3, 3);
  Matrix sigma = psd(44, 3, 3);
  Superoperator g = perspective_xlogx(rho, sigma);
  for (std::uint64_t seed : {45, 46}) {
    Matrix x = ginibre(seed, 3);
    Matrix y = ginibre(seed + 50, 3);
    const Complex lhs = frobenius_inner(g.apply(x), y);
    const Complex rhs = std::conj(frobenius_inner(g.apply(y), x));
    REQUIRE(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("perspective_xlogx: rejects states leaking out of sigma's support") {
  Matrix rho = psd(47, 4, 4);          // full rank
  Matrix sigma_lowrank = psd(48, 4, 2);  // rank 2
  REQUIRE_THROWS_AS(perspective_xlogx(rho, sigma_lowrank), SupportViolationError);
  REQUIRE_THROWS_AS(quasi_entropy_direct(rho, sigma_lowrank, Matrix::Identity(4, 4)),
                    SupportViolationError);
  REQUIRE_THROWS_AS(perspective_xlogx(rho, Matrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("perspective_xlogx: compatible singular supports are accepted") {
  // rho supported inside a rank-2 sigma: both diagonal makes support containment exact
  Matrix rho = Matrix::Zero(3, 3);
  rho(0, 0) = 0.6;
  rho(1, 1) = 0.4;
  Matrix sigma = Matrix::Zero(3, 3);
  sigma(0, 0) = 0.5;
  sigma(1, 1) = 0.5;
  const double val = quasi_entropy(rho, sigma, Matrix::Identity(3, 3));
  const double ref = 0.6 * std::log(0.6 / 0.5) + 0.4 * std::log(0.4 / 0.5);
  REQUIRE(val == Approx(ref).margin(1e-12));
}

TEST_CASE("quasi_entropy: O = I reduces to relative entropy") {
  for (std::uint64_t seed : {51, 52, 53}) {
    Matrix rho = psd(seed, 3, 3);
    Matrix sigma = psd(seed + 10, 3, 3);
    const double val = quasi_entropy(rho, sigma, Matrix::Identity(3, 3));
    REQUIRE(val == Approx(oracle::relative_entropy_naive(rho, sigma)).margin(1e-11));
  }
}

TEST_CASE("quasi_entropy: O = 0 gives zero") {
  Matrix rho = psd(54, 3, 3);
  Matrix sigma = psd(55, 3, 3);
  REQUIRE(quasi_entropy(rho, sigma, Matrix::Zero(3, 3)) == Approx(0.0).margin(1e-15));
}

TEST_CASE("quasi_entropy: GHZ AB-marginal against the flat state gives log 2") {
  StateSpec spec;
  spec.kind = StateKind::Ghz;
  spec.dims = DimList{2, 2, 2};
  DensityMatrix ghz = generate(spec);
  Matrix rho_ab = partial_trace(ghz.matrix, ghz.dims, {2});
  Matrix flat = Matrix::Identity(4, 4) / 4.0;
  // D(rho_AB ‖ I/4) = log 4 - S(rho_AB) = log 4 - log 2 = log 2
  const double val = quasi_entropy(rho_ab, flat, Matrix::Identity(4, 4));
  REQUIRE(val == Approx(std::log(2.0)).margin(1e-11));
}

TEST_CASE("quasi_entropy: superoperator and direct-trace routes agree") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 3);
    Matrix rho = psd(derive_seed(60, seed), n, n);
    Matrix sigma = psd(derive_seed(61, seed), n, n);
    Matrix o = ginibre(derive_seed(62, seed), n);
    const double a = quasi_entropy(rho, sigma, o);
    const double b = quasi_entropy_direct(rho, sigma, o);
    REQUIRE(std::abs(a - b) < 1e-11);
    // realness of the form itself
    const Complex form = quasi_entropy_form(perspective_xlogx(rho, sigma), o);
    REQUIRE(std::abs(form.imag()) < 1e-11);
  }
}

TEST_CASE("perspective_general: f = square with flat sigma squares the left factor") {
  Matrix rho = psd(71, 3, 3);
  Superoperator g = perspective_general(OperatorConvexF::square(), rho, Matrix::Identity(3, 3));
  Matrix x = ginibre(72, 3);
  REQUIRE((g.apply(x) - rho * rho * x).norm() < 1e-10);
}

TEST_CASE("perspective_general: agrees with the kron-built x log x route") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 3);
    Matrix rho = psd(derive_seed(80, seed), n, n);
    Matrix sigma = psd(derive_seed(81, seed), n, n);
    Superoperator a = perspective_general(OperatorConvexF::xlogx(), rho, sigma);
    Superoperator b = perspective_xlogx(rho, sigma);
    REQUIRE((a.matrix - b.matrix).norm() < 1e-10);
  }
}

TEST_CASE("perspective_general: neglog of an identical pair has a vanishing form") {
  Matrix rho = psd(82, 3, 3);
  Superoperator g = perspective_general(OperatorConvexF::neglog(), rho, rho);
  const Complex form = quasi_entropy_form(g, Matrix::Identity(3, 3));
  REQUIRE(std::abs(form) < 1e-11);
}

TEST_CASE("perspective_general: eigenvalue formula on nondegenerate pairs") {
  const Index n = 3;
  Matrix rho = psd(83, n, n);
  Matrix sigma = psd(84, n, n);
  Eigen::SelfAdjointEigenSolver<Matrix> er(rho);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  // generic random spectra: check gaps before asserting eigenvector-level facts
  auto min_gap = [](const Eigen::VectorXd& v) {
    double gap = std::numeric_limits<double>::infinity();
    for (Index i = 0; i + 1 < v.size(); ++i) gap = std::min(gap, v(i + 1) - v(i));
    return gap;
  };
  REQUIRE(min_gap(er.eigenvalues()) > 1e-8);
  REQUIRE(min_gap(es.eigenvalues()) > 1e-8);
  for (const auto& f : kFunctions) {
    Superoperator g = perspective_general(f, rho, sigma);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        Matrix e_ij = er.eigenvectors().col(i) * es.eigenvectors().col(j).adjoint();
        const double expected = f.perspective_value(er.eigenvalues()(i), es.eigenvalues()(j));
        REQUIRE((g.apply(e_ij) - expected * e_ij).norm() < 1e-10);
      }
  }
}

TEST_CASE("perspective_general: support direction depends on the function") {
  Matrix full = psd(85, 3, 3);
  Matrix lowrank = psd(86, 3, 2);
  // xlogx, square, power: a sigma kernel makes the limit infinite
  REQUIRE_THROWS_AS(perspective_general(OperatorConvexF::xlogx(), full, lowrank),
                    SupportViolationError);
  REQUIRE_THROWS_AS(perspective_general(OperatorConvexF::square(), full, lowrank),
                    SupportViolationError);
  REQUIRE_THROWS_AS(perspective_general(OperatorConvexF::power(1.5), full, lowrank),
                    SupportViolationError);
  // neglog needs the opposite containment
  REQUIRE_NOTHROW(perspective_general(OperatorConvexF::neglog(), full, lowrank));
  REQUIRE_THROWS_AS(perspective_general(OperatorConvexF::neglog(), lowrank, full),
                    SupportViolationError);
}

TEST_CASE("OperatorConvexF: scalar convexity on a positive grid") {
  const double grid[] = {0.1, 0.35, 0.8, 1.0, 1.7, 2.4, 5.0};
  for (const auto& f : kFunctions)
    for (double x : grid)
      for (double y : grid) {
        const double mid = f.scalar(0.5 * (x + y));
        const double avg = 0.5 * (f.scalar(x) + f.scalar(y));
        REQUIRE(mid <= avg + 1e-12);
      }
}

TEST_CASE("OperatorConvexF: names, parsing, and exponent validation") {
  REQUIRE(OperatorConvexF::from_name("xlogx").kind() == OperatorConvexF::Kind::XLogX);
  REQUIRE(OperatorConvexF::from_name("power(1.5)").exponent() == Approx(1.5));
  REQUIRE(OperatorConvexF::power(1.5).name() == "power(1.5)");
  REQUIRE_THROWS_AS(OperatorConvexF::power(1.0), ConfigError);
  REQUIRE_THROWS_AS(OperatorConvexF::power(2.5), ConfigError);
  REQUIRE_THROWS_AS(OperatorConvexF::from_name("cube"), ConfigError);
}

TEST_CASE("joint_convexity_trial: degenerate mixtures give an exactly null margin") {
  Matrix o = ginibre(90, 3);
  ConvexPair p1{psd(91, 3, 3), psd(92, 3, 3)};
  ConvexPair p2{psd(93, 3, 3), psd(94, 3, 3)};
  for (const auto& f : kFunctions) {
    REQUIRE(std::abs(joint_convexity_trial(p1, p2, 0.0, o, f)) < 1e-11);
    REQUIRE(std::abs(joint_convexity_trial(p1, p2, 1.0, o, f)) < 1e-11);
    REQUIRE(std::abs(joint_convexity_trial(p1, p1, 0.37, o, f)) < 1e-11);
  }
  REQUIRE_THROWS_AS(joint_convexity_trial(p1, p2, 1.2, o, kFunctions[0]), ConfigError);
  REQUIRE_THROWS_AS(joint_convexity_trial(p1, p2, -0.1, o, kFunctions[0]), ConfigError);
}

TEST_CASE("joint_convexity_trial: margins stay nonnegative across functions and sizes") {
  long trial = 0;
  for (const auto& f : kFunctions) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const Index n = 2 + static_cast<Index>(seed % 3);
      Rng rng(derive_seed(1000, trial++));
      ConvexPair p1{random_density(rng, n, n), random_density(rng, n, n)};
      ConvexPair p2{random_density(rng, n, n), random_density(rng, n, n)};
      Matrix o = gaussian_matrix(rng, n, n);
      const double c = rng.uniform01();
      REQUIRE(joint_convexity_trial(p1, p2, c, o, f) >= -1e-9);
    }
  }
}

TEST_CASE("joint_convexity_trial: the mixed pair still yields commuting L and R") {
  Rng rng(2000);
  const Index n = 3;
  ConvexPair p1{random_density(rng, n, n), random_density(rng, n, n)};
  ConvexPair p2{random_density(rng, n, n), random_density(rng, n, n)};
  const double c = 0.42;
  Matrix rho_mix = c * p1.rho + (1 - c) * p2.rho;
  Matrix sigma_mix = c * p1.sigma + (1 - c) * p2.sigma;
  Superoperator l = left_superop(rho_mix);
  Superoperator r = right_superop(sigma_mix);
  REQUIRE((l.matrix * r.matrix - r.matrix * l.matrix).norm() < 1e-12);
}
