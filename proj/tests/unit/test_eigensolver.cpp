#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclab/eigensolver.hpp"

using namespace fraclab;

namespace {

DiscParams coarse(double h = 0.04, Scheme sc = Scheme::P1) {
  DiscParams p;
  p.h = h;
  p.L = 8.0;
  p.scheme = sc;
  return p;
}

}  // namespace

TEST_CASE("inverse iteration on a small diagonal pencil") {
  Eigen::MatrixXd K = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(3, 3);
  EigenResult r = smallest_eigenpair(K, M);
  CHECK(r.converged);
  CHECK(r.lambda1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.u_interior(1)) == doctest::Approx(1.0));
  CHECK(r.u_interior(1) > 0.0);

  Eigen::MatrixXd bad = K;
  bad(0, 0) = -1.0;
  CHECK_THROWS_AS(smallest_eigenpair(bad, M), Error);
  CHECK_THROWS_AS(smallest_eigenpair(K, Eigen::MatrixXd::Identity(2, 2)), Error);
}

TEST_CASE("generalized pencil agrees with a dense solver") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  const int n = 12;
  Eigen::MatrixXd A(n, n), B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A(i, j) = U(rng);
      B(i, j) = U(rng);
    }
  Eigen::MatrixXd K = A * A.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd M = B * B.transpose() + Eigen::MatrixXd::Identity(n, n);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(K, M);
  EigenResult r = smallest_eigenpair(K, M);
  CHECK(r.lambda1 == doctest::Approx(ges.eigenvalues()(0)).epsilon(1e-10));
  CHECK(r.normalization == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("Dirichlet baseline decreases toward the extrapolated value") {
  Domain1D om(-1, 1);
  FractionalOrder o(1, 0.5);
  double prev = 1e300;
  for (double h : {0.08, 0.04, 0.02}) {
    EigenResult r = solve_mixed(ExteriorPartition::all_dirichlet(om), o, coarse(h));
    CHECK(r.converged);
    CHECK(r.lambda1 < prev);
    CHECK(r.lambda1 > 1.1577);
    CHECK(r.rayleigh_full == doctest::Approx(r.lambda1).epsilon(1e-10));
    CHECK(r.u_exterior.size() == 0);
    // eigenfunction is positive inside
    CHECK(r.u_interior.minCoeff() > 0.0);
    prev = r.lambda1;
  }
  CHECK(prev < 1.161);
}

TEST_CASE("pure Neumann problem has eigenvalue zero") {
  for (auto [s, sc] : {std::pair{0.3, Scheme::P0}, std::pair{0.5, Scheme::P1}}) {
    EigenResult r = solve_mixed(ExteriorPartition::all_neumann(Domain1D(0, 1)), FractionalOrder(1, s), coarse(0.05, sc));
    CHECK(r.reported_zero);
    CHECK(r.lambda1 == 0.0);
    CHECK(std::abs(r.raw_lambda) < 1e-9);
    // the eigenfunction is constant, exterior included
    const Eigen::VectorXd u = r.full_vector();
    CHECK((u.array() - u(0)).abs().maxCoeff() < 1e-6 * std::abs(u(0)));
    CHECK(r.gauss_residual < 1e-10);
  }
}

TEST_CASE("eigenvalues are monotone in the Dirichlet set") {
  Domain1D om(0, 1);
  FractionalOrder o(1, 0.4);
  // D1 subset of D2 subset of D3 = all
  auto p1 = ExteriorPartition::with_dirichlet(om, ExteriorSet({{1, 2}}));
  auto p2 = ExteriorPartition::with_dirichlet(om, ExteriorSet({{-1, 0}, {1, 3}}));
  auto p3 = ExteriorPartition::all_dirichlet(om);
  const double l1 = solve_mixed(p1, o, coarse(0.05)).lambda1;
  const double l2 = solve_mixed(p2, o, coarse(0.05)).lambda1;
  const double l3 = solve_mixed(p3, o, coarse(0.05)).lambda1;
  CHECK(0.0 < l1);
  CHECK(l1 < l2);
  CHECK(l2 < l3);
}

TEST_CASE("singular exterior block is reported") {
  // a hand-built system whose exterior DOF has a zero diagonal
  auto d = std::make_shared<const Discretization>(
      build_mesh(ExteriorPartition::all_neumann(Domain1D(0, 1)), FractionalOrder(1, 0.3), 0.25, 4.0, Scheme::P0));
  StiffnessSystem sys = assemble(d, FractionalOrder(1, 0.3));
  sys.K_EE_diag(2) = 0.0;
  try {
    schur_reduce(std::make_shared<const StiffnessSystem>(sys));
    FAIL("expected SingularExteriorBlock");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularExteriorBlock);
  }
}

TEST_CASE("inverse iteration converges when the eigenvalue is tiny") {
  Domain1D omega(-1.0, 1.0);
  DiscParams d;
  d.h = 0.02;
  d.L = 65.0;
  auto p = ExteriorPartition::with_dirichlet(omega, ExteriorSet({{65.0, 66.0}}));
  EigenResult r = solve_mixed(p, FractionalOrder(1, 0.75), d, {});
  CHECK(r.converged);
  CHECK(r.lambda1 > 0.0);
  CHECK(r.lambda1 < 1e-4);
}
