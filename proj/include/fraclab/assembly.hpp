#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fraclab/fracops.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab {

enum class Scheme { P0, P1 };

Scheme scheme_from_string(const std::string& name);
std::string to_string(Scheme scheme);

enum class CellClass { Interior, Neumann, Dirichlet };

struct SnapRecord {
  double original = 0.0;
  double snapped = 0.0;
};

/// Uniform grid on [a - L, b + L]. Cells are numbered left to right; cells
/// [n_left, n_left + n_interior) make up Omega. Free degrees of freedom are
/// numbered interior first, then exterior Neumann.
///
/// P0: one value per Omega cell and per Neumann cell.
/// P1: continuous hats on the closure of Omega; Neumann cells carry broken linears
/// that agree with Omega only at the shared endpoint. A boundary node whose
/// exterior neighbour is Dirichlet is pinned to zero.
struct Discretization {
  ExteriorPartition partition;  // as given, before snapping
  Scheme scheme = Scheme::P1;
  double h = 0.0;
  double L = 0.0;
  int n_left = 0;
  int n_interior = 0;
  int n_right = 0;
  std::vector<CellClass> cell_class;
  CellClass far_left = CellClass::Dirichlet;
  CellClass far_right = CellClass::Dirichlet;
  std::vector<SnapRecord> snaps;

  int n_free_interior = 0;
  int n_free_exterior = 0;
  /// Local-to-free map per cell: P0 uses slot 0 only; -1 marks a value pinned to zero.
  std::vector<std::array<int, 2>> cell_dofs;
  /// Coordinate carried by each free DOF (node for P1, cell midpoint for P0).
  std::vector<double> dof_coord;

  const Domain1D& omega() const { return partition.omega; }
  int num_cells() const { return static_cast<int>(cell_class.size()); }
  int num_free() const { return n_free_interior + n_free_exterior; }
  int local_count() const { return scheme == Scheme::P0 ? 1 : 2; }
  bool in_omega(int cell) const { return cell >= n_left && cell < n_left + n_interior; }

  /// Node i, with nodes n_left and n_left + n_interior equal to a and b exactly.
  double node(int i) const;
  Interval cell(int j) const { return {node(j), node(j + 1)}; }
  double max_snap() const;
};

Discretization build_mesh(const ExteriorPartition& partition, const FractionalOrder& order, double h, double L,
                          Scheme scheme);

/// Symmetric stiffness blocks and the Omega mass matrix over free DOFs.
/// u^T K u equals (a/2) times the double integral of (u(x)-u(y))^2 |x-y|^{-1-2s}
/// over pairs not both in the complement, with Dirichlet values zero and the
/// Neumann far field left out.
struct StiffnessSystem {
  std::shared_ptr<const Discretization> disc;
  FractionalOrder order;
  Eigen::MatrixXd K_II;
  Eigen::MatrixXd K_IE;
  Eigen::VectorXd K_EE_diag;
  Eigen::VectorXd K_EE_off;  // K_EE(i, i+1); zero between different cells
  Eigen::MatrixXd M;         // interior block only; exterior DOFs carry no mass
  /// Per interior DOF: diagonal contribution of the Dirichlet set and far field.
  Eigen::VectorXd tail_corrections;

  int n_interior() const { return static_cast<int>(K_II.rows()); }
  int n_exterior() const { return static_cast<int>(K_EE_diag.size()); }

  /// Dense assembled matrix over all free DOFs (tests and small systems).
  Eigen::MatrixXd full() const;
  /// K u over all free DOFs without forming full().
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
};

StiffnessSystem assemble(std::shared_ptr<const Discretization> disc, const FractionalOrder& order);

/// Reference interaction tables on unit cells, exposed for tests.
namespace reference {
/// int_0^1 int_0^1 |d + eta - xi|^{-1-2s} for |d| >= 1 (P0 offsets).
double p0_offset(int d, double s);
/// 4x4 Gram matrix of (1-xi, xi, 1-eta, eta) against |d + eta - xi|^{-1-2s}, |d| >= 2.
Eigen::Matrix4d p1_separated(int d, double s, int points = 16);
/// 2x2 energy matrix of touching cells in the slope coordinates.
Eigen::Matrix2d p1_touching(double s);
/// Self-interaction coefficient 2 / ((2-2s)(3-2s)).
double p1_self(double s);
}  // namespace reference

}  // namespace fraclab
