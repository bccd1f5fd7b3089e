#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fraclab/interval.hpp"

namespace fraclab {

/// Normalization of the fractional Laplacian, both ways.
struct NormalizationReport {
  double value = 0.0;              // reciprocal of the defining integral
  double defining_integral = 0.0;  // int (1 - cos xi_1) / |xi|^{N+2s}
  double gamma_form = 0.0;         // 2^{2s-1} pi^{-N/2} Gamma((N+2s)/2) / |Gamma(-s)|
  double ratio = 0.0;              // gamma_form / value
};

NormalizationReport normalization_constant(int dimension, double s, double tol = 1e-8);

struct FractionalOrder {
  int dimension = 1;
  double s = 0.5;
  double a_ns = 0.0;

  FractionalOrder() = default;
  FractionalOrder(int dimension, double s, double tol = 1e-8);

  /// Exponent of the kernel |x - y|^{-(N + 2s)}.
  double kernel_exponent() const { return dimension + 2.0 * s; }
};

/// Surface measure of the unit sphere in R^N (2 in 1D, 2 pi in 2D).
double sphere_measure(int dimension);

// ---------------------------------------------------------------------------
// 1D kernel integrals

/// Exact double integral of |x - y|^{-(1+2s)} over two cells with disjoint interiors.
double kernel_cell_integral(const Interval& cellA, const Interval& cellB, const FractionalOrder& order);

/// I(x) = int_Omega |x - y|^{-(1+2s)} dy for x outside the closed domain.
double exterior_mass(double x, const Domain1D& omega, const FractionalOrder& order);

/// int_cell I(x) dx for a cell in the complement of Omega.
double exterior_mass(const Interval& cell, const Domain1D& omega, const FractionalOrder& order);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Disk {
  Point2 center;
  double radius = 1.0;
};

/// 2D version on a disk: int_disk |x - y|^{-(2+2s)} dy by polar quadrature around x.
double exterior_mass(const Point2& x, const Disk& omega, const FractionalOrder& order, double tol = 1e-8);

/// int_{|z| > R} |z|^{-(N+2s)} dz.
double tail_mass(double R, const FractionalOrder& order);

// ---------------------------------------------------------------------------
// Dini condition

/// Sampled table of (t, value) pairs, interpolated linearly in log-log coordinates
/// and extended past both ends with the end slopes.
class LogLogTable {
 public:
  LogLogTable() = default;
  LogLogTable(std::vector<double> t, std::vector<double> value);

  double log_eval(double log_t) const;
  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::vector<double> lt_, lv_;
  std::vector<double> t_, v_;
};

/// Boundary modulus omega_0. log_spine is omega_0(t) = 1 / (1 + ln(1/t)),
/// which has omega_0(0+) = 0 and stays finite on (0, 1].
class ModulusOfContinuity {
 public:
  enum class Kind { Power, LogSpine, User };

  static ModulusOfContinuity power(double beta);
  static ModulusOfContinuity log_spine();
  static ModulusOfContinuity user(std::vector<double> t, std::vector<double> value);

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  double operator()(double t) const;
  /// log omega_0(e^{-v}), evaluated without forming e^{-v}.
  double log_at_exp_neg(double v) const;

 private:
  Kind kind_ = Kind::Power;
  double beta_ = 1.0;
  LogLogTable table_;
};

class KernelOrder {
 public:
  enum class Kind { Power, User };

  static KernelOrder power(double alpha);
  static KernelOrder user(std::vector<double> t, std::vector<double> value);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double operator()(double t) const;
  /// log Psi(e^{v}).
  double log_at_exp(double v) const;

 private:
  Kind kind_ = Kind::Power;
  double alpha_ = 0.0;
  LogLogTable table_;
};

struct DiniResult {
  enum class Status { Finite, Divergent };
  Status status = Status::Divergent;
  double value = 0.0;      // valid when Finite
  double rate = 0.0;       // fitted limiting decay rate of the integrand in v = ln(1/t)
  double log_coeff = 0.0;  // fitted coefficient of 1/v in the decay rate
  bool finite() const { return status == Status::Finite; }
};

/// Classifies int_0^1 (omega_0(t)/t) Psi(1/t) dt. Throws Inconclusive near the critical case.
DiniResult dini_check(const ModulusOfContinuity& omega0, const KernelOrder& psi, double tol = 1e-2);

// ---------------------------------------------------------------------------
// Indicator seminorm

struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

/// lhs = int_{Omega^c} I^alpha_Omega, rhs = (1/2) [chi_Omega]_{alpha/2}^2 computed independently.
/// Omega is a finite union of disjoint bounded intervals.
IdentityReport indicator_seminorm_identity(const std::vector<Interval>& omega, double alpha, double tol = 1e-8);

}  // namespace fraclab
