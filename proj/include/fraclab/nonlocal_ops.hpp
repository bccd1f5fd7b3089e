#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fraclab/assembly.hpp"

namespace fraclab {

/// Coefficients over all free DOFs of a discretization (interior first).
/// Pinned values and the Dirichlet side are zero; the Neumann far field is not represented.
class DiscreteFunction {
 public:
  DiscreteFunction(std::shared_ptr<const Discretization> disc, Eigen::VectorXd coeffs);

  /// Every free DOF set to c.
  static DiscreteFunction constant(std::shared_ptr<const Discretization> disc, double c);

  const Discretization& disc() const { return *disc_; }
  std::shared_ptr<const Discretization> disc_ptr() const { return disc_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd interior() const { return coeffs_.head(disc_->n_free_interior); }
  Eigen::VectorXd exterior() const { return coeffs_.tail(disc_->n_free_exterior); }

  /// Value at x inside the collar (0 on Dirichlet cells). Throws outside [a-L, b+L].
  double value(double x) const;
  /// (1/|Omega|) int_Omega u.
  double mean() const;
  /// int_Omega u.
  double integral() const;
  /// int_Omega u(y) |x - y|^{-1-2s} dy for x outside the closed domain.
  double kernel_integral(double x, double s) const;
  double max_abs_interior() const;

 private:
  std::shared_ptr<const Discretization> disc_;
  Eigen::VectorXd coeffs_;
};

/// a_{N,s} int_Omega (u(x) - u(y)) |x-y|^{-1-2s} dy with u(x) read from the exterior representation.
double nonlocal_normal(const DiscreteFunction& u, double x, const FractionalOrder& order);

/// Galerkin form of the normal derivative: the exterior rows of K u, one per exterior DOF.
Eigen::VectorXd nonlocal_normal_rows(const StiffnessSystem& system, const DiscreteFunction& u);

/// Weighted average of u over Omega against the kernel centered at x.
double neumann_value(const DiscreteFunction& u, double x, const FractionalOrder& order);

struct FarfieldRate {
  std::vector<double> points;
  std::vector<double> deviations;
  double slope = 0.0;
  bool degenerate = false;
};

FarfieldRate farfield_rate(const DiscreteFunction& u, const FractionalOrder& order, const std::vector<double>& points);

/// |1^T K u|: the discrete integral of the operator over Omega plus the normal derivative over the complement.
double gauss_residual(const StiffnessSystem& system, const DiscreteFunction& u);

/// |u^T K v - (v_I . (K u)_I + v_E . (K u)_E)|.
double parts_residual(const StiffnessSystem& system, const DiscreteFunction& u, const DiscreteFunction& v);

/// Phi(x) = int_Omega phi(y) |x - y|^{-1-2s} dy.
double phi_potential(const DiscreteFunction& phi, double x, const FractionalOrder& order);

struct IntegrabilityRow {
  double R = 0.0;
  double integral = 0.0;    // int over the complement within (-R, R)
  double tail_bound = 0.0;  // bound on the remainder beyond R
};

std::vector<IntegrabilityRow> phi_integrability(const DiscreteFunction& phi, const FractionalOrder& order,
                                                const std::vector<double>& radii);

/// int over the ball of radius r tangent to a hyperplane of dist(x, plane)^{-2s}.
double e_of_r(double r, double s, int dimension = 2, double tol = 1e-10);

/// u^T K u recomputed by direct quadrature over cell pairs, without the assembled matrices.
/// Meshes of at most 40 cells.
double energy_by_quadrature(const DiscreteFunction& u, const FractionalOrder& order, double tol = 1e-12);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fraclab
