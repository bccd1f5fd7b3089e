#include "fraclab/eigensolver.hpp"

#include <cmath>

#include "fraclab/nonlocal_ops.hpp"

namespace fraclab {

SchurReduction schur_reduce(std::shared_ptr<const StiffnessSystem> system) {
  if (!system) throw Error(ErrorCode::InvalidArgument, "null stiffness system");
  const StiffnessSystem& sys = *system;
  const int nI = sys.n_interior(), nE = sys.n_exterior();
  SchurReduction red;
  red.system = system;
  red.M = sys.M;
  red.K_eff = sys.K_II;
  red.chol_diag.resize(nE);
  red.chol_sub.resize(std::max(nE - 1, 0));
  for (int i = 0; i < nE; ++i) {
    double piv = sys.K_EE_diag(i);
    if (i > 0) piv -= red.chol_sub(i - 1) * red.chol_sub(i - 1);
    if (!(piv > 0.0))
      throw Error(ErrorCode::SingularExteriorBlock,
                  "exterior DOF " + std::to_string(i) + " has no positive interaction with the domain");
    red.chol_diag(i) = std::sqrt(piv);
    if (i + 1 < nE) red.chol_sub(i) = sys.K_EE_off(i) / red.chol_diag(i);
  }
  if (nE == 0) return red;

  // Y = L^{-1} K_EI, then K_eff = K_II - Y^T Y
  Eigen::MatrixXd Y = sys.K_IE.transpose();
  Y.row(0) /= red.chol_diag(0);
  for (int i = 1; i < nE; ++i) {
    if (red.chol_sub(i - 1) != 0.0) Y.row(i) -= red.chol_sub(i - 1) * Y.row(i - 1);
    Y.row(i) /= red.chol_diag(i);
  }
  red.K_eff.selfadjointView<Eigen::Lower>().rankUpdate(Y.transpose(), -1.0);
  red.K_eff.triangularView<Eigen::StrictlyUpper>() = red.K_eff.transpose().triangularView<Eigen::StrictlyUpper>();
  (void)nI;
  return red;
}

Eigen::VectorXd SchurReduction::back_map(const Eigen::VectorXd& u_interior) const {
  const StiffnessSystem& sys = *system;
  const int nE = sys.n_exterior();
  if (u_interior.size() != sys.n_interior()) throw Error(ErrorCode::InvalidArgument, "interior vector has wrong length");
  Eigen::VectorXd y = -(sys.K_IE.transpose() * u_interior);
  if (nE == 0) return y;
  // L z = y, then L^T x = z
  y(0) /= chol_diag(0);
  for (int i = 1; i < nE; ++i) y(i) = (y(i) - chol_sub(i - 1) * y(i - 1)) / chol_diag(i);
  y(nE - 1) /= chol_diag(nE - 1);
  for (int i = nE - 2; i >= 0; --i) y(i) = (y(i) - chol_sub(i) * y(i + 1)) / chol_diag(i);
  return y;
}

Eigen::VectorXd EigenResult::full_vector() const {
  Eigen::VectorXd u(u_interior.size() + u_exterior.size());
  u << u_interior, u_exterior;
  return u;
}

EigenResult smallest_eigenpair(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M, double tol, int max_iter) {
  const int n = static_cast<int>(K.rows());
  if (n == 0 || K.cols() != n || M.rows() != n || M.cols() != n)
    throw Error(ErrorCode::InvalidArgument, "pencil matrices must be square and of equal size");
  const double scale = K.trace() / M.trace();
  const double sigma = 1e-10 * std::abs(scale);
  Eigen::LLT<Eigen::MatrixXd> llt(K + sigma * M);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::IndefinitePencil, "shifted pencil is not positive definite");

  EigenResult res;
  Eigen::VectorXd u = Eigen::VectorXd::Ones(n);
  u /= std::sqrt(u.dot(M * u));
  double lambda = u.dot(K * u);
  const double floor = 1e-13 * std::abs(scale);
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd w = llt.solve(M * u);
    w /= std::sqrt(w.dot(M * w));
    const double next = w.dot(K * w);
    u = std::move(w);
    res.iterations = it;
    const double dl = std::abs(next - lambda);
    lambda = next;
    const Eigen::VectorXd Mu = M * u;
    const double resid = (K * u - lambda * Mu).norm() / Mu.norm();
    if (dl <= std::max(tol * std::abs(lambda), floor) && resid <= std::sqrt(tol) * std::max(std::abs(lambda), 1.0)) {
      res.converged = true;
      res.rq_residual = resid;
      break;
    }
    res.rq_residual = resid;
  }
  if (lambda < -1e-9 * std::max(std::abs(scale), 1.0))
    throw Error(ErrorCode::IndefinitePencil, "negative Rayleigh quotient " + std::to_string(lambda));
  if ((M * u).sum() < 0.0) u = -u;
  const double nrm = u.dot(M * u);
  u /= std::sqrt(nrm);
  res.u_interior = u;
  res.normalization = u.dot(M * u);
  res.raw_lambda = lambda;
  if (lambda < 1e-9) {
    res.reported_zero = true;
    res.lambda1 = 0.0;
  } else {
    res.lambda1 = lambda;
  }
  return res;
}

EigenResult solve_mixed(const ExteriorPartition& partition, const FractionalOrder& order, const DiscParams& dp,
                        const SolverParams& solver) {
  auto disc = std::make_shared<const Discretization>(build_mesh(partition, order, dp.h, dp.L, dp.scheme));
  auto system = std::make_shared<const StiffnessSystem>(assemble(disc, order));
  if (system->n_interior() == 0) throw Error(ErrorCode::BadParameters, "mesh has no free interior DOFs");
  SchurReduction red = schur_reduce(system);
  EigenResult res = smallest_eigenpair(red.K_eff, red.M, solver.tol, solver.max_iter);
  res.u_exterior = red.back_map(res.u_interior);
  res.system = system;

  const Eigen::VectorXd u = res.full_vector();
  const Eigen::VectorXd Ku = system->apply(u);
  res.rayleigh_full = u.dot(Ku) / res.u_interior.dot(system->M * res.u_interior);
  res.gauss_residual = gauss_residual(*system, DiscreteFunction(disc, u));
  ConditionC c = condition_C(partition.dirichlet, partition.omega, order);
  res.condition_c = c.value;
  res.condition_c_finite = c.finite;
  return res;
}

}  // namespace fraclab
