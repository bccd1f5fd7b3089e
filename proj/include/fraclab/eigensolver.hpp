#pragma once

#include <memory>

#include <Eigen/Dense>

#include "fraclab/assembly.hpp"

namespace fraclab {

/// Elimination of the exterior Neumann block.
struct SchurReduction {
  Eigen::MatrixXd K_eff;
  Eigen::MatrixXd M;
  std::shared_ptr<const StiffnessSystem> system;
  Eigen::VectorXd chol_diag;  // bidiagonal Cholesky factor of K_EE
  Eigen::VectorXd chol_sub;

  /// u_E = -K_EE^{-1} K_EI u_I.
  Eigen::VectorXd back_map(const Eigen::VectorXd& u_interior) const;
};

SchurReduction schur_reduce(std::shared_ptr<const StiffnessSystem> system);

struct SolverParams {
  double tol = 1e-12;
  int max_iter = 1000;
};

struct DiscParams {
  double h = 0.02;
  double L = 8.0;
  Scheme scheme = Scheme::P1;
};

struct EigenResult {
  double lambda1 = 0.0;
  bool reported_zero = false;  // raw value was below 1e-9 and is reported as 0
  double raw_lambda = 0.0;
  Eigen::VectorXd u_interior;
  Eigen::VectorXd u_exterior;
  int iterations = 0;
  bool converged = false;
  double rq_residual = 0.0;    // |K u - lambda M u| / |M u|
  double normalization = 0.0;  // u^T M u

  // filled by solve_mixed
  std::shared_ptr<const StiffnessSystem> system;
  double rayleigh_full = 0.0;  // Rayleigh quotient of the reconstructed full vector
  double gauss_residual = 0.0;
  double condition_c = 0.0;
  bool condition_c_finite = true;

  /// Coefficients over all free DOFs, interior first.
  Eigen::VectorXd full_vector() const;
};

/// Inverse iteration for the smallest eigenpair of K u = lambda M u.
EigenResult smallest_eigenpair(const Eigen::MatrixXd& K_eff, const Eigen::MatrixXd& M, double tol = 1e-12,
                               int max_iter = 1000);

EigenResult solve_mixed(const ExteriorPartition& partition, const FractionalOrder& order, const DiscParams& disc,
                        const SolverParams& solver = {});

}  // namespace fraclab
