#include "fraclab/fracops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

using std::numbers::pi;

void check_order(int dimension, double s) {
  if (dimension != 1 && dimension != 2) throw Error(ErrorCode::InvalidArgument, "dimension must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidArgument, "s must lie in (0, 1)");
}

double half_sinc_sq(double t) {
  // 2 sin^2(t/2) / t^2
  if (std::abs(t) < 1e-4) return 0.5 - t * t / 24.0;
  double x = 0.5 * t;
  double r = std::sin(x) / x;
  return 0.5 * r * r;
}

// int_0^inf (1 - cos t) t^{-1-2s} dt
double radial_integral(double s, double tol) {
  quad::QuadOptions o;
  o.rel_tol = tol;
  const double q = 1.0 - 2.0 * s;
  double head;
  if (q >= 0.0) {
    head = quad::integrate([&](double t) { return std::pow(t, q) * half_sinc_sq(t); }, 0.0, 1.0, o);
  } else {
    head = quad::integrate_algebraic(half_sinc_sq, 1.0, -q, o);
  }

  // int_1^inf cos t * t^{-1-2s}: half periods between zeros of cos, accelerated
  auto f = [s](double t) { return std::cos(t) * std::pow(t, -1.0 - 2.0 * s); };
  std::vector<double> partial;
  double sum = quad::integrate(f, 1.0, 1.5 * pi, o);
  partial.push_back(sum);
  for (int k = 1; k <= 40; ++k) {
    double lo = (k + 0.5) * pi;
    quad::QuadOptions ok = o;
    ok.abs_tol = 1e-3 * tol * std::abs(sum);
    sum += quad::integrate(f, lo, lo + pi, ok);
    partial.push_back(sum);
  }
  quad::Extrapolated osc = quad::wynn_epsilon(partial);
  return head + 1.0 / (2.0 * s) - osc.value;
}

double angular_factor(double s, double tol) {
  // int_0^{2 pi} |cos theta|^{2s} = 4 int_0^{pi/2} sin^{2s}
  quad::QuadOptions o;
  o.rel_tol = tol;
  return 4.0 * quad::integrate([s](double p) { return std::pow(std::sin(p), 2.0 * s); }, 0.0, 0.5 * pi, o);
}

}  // namespace

NormalizationReport normalization_constant(int dimension, double s, double tol) {
  check_order(dimension, s);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const double qtol = std::max(0.05 * tol, 1e-14);
  const double J = radial_integral(s, qtol);
  NormalizationReport rep;
  rep.defining_integral = (dimension == 1 ? 2.0 : angular_factor(s, qtol)) * J;
  rep.value = 1.0 / rep.defining_integral;
  const double N = dimension;
  rep.gamma_form = std::pow(2.0, 2.0 * s - 1.0) * std::pow(pi, -0.5 * N) * std::tgamma(0.5 * (N + 2.0 * s)) /
                   std::abs(std::tgamma(-s));
  rep.ratio = rep.gamma_form / rep.value;
  return rep;
}

FractionalOrder::FractionalOrder(int dimension_, double s_, double tol)
    : dimension(dimension_), s(s_), a_ns(normalization_constant(dimension_, s_, tol).value) {}

double sphere_measure(int dimension) {
  if (dimension == 1) return 2.0;
  if (dimension == 2) return 2.0 * pi;
  throw Error(ErrorCode::InvalidArgument, "dimension must be 1 or 2");
}

double kernel_cell_integral(const Interval& cellA, const Interval& cellB, const FractionalOrder& order) {
  if (order.dimension != 1) throw Error(ErrorCode::InvalidArgument, "cell integrals are one-dimensional");
  if (!cellA.bounded() || !cellB.bounded() || cellA.empty() || cellB.empty())
    throw Error(ErrorCode::InvalidCells, "cells must be bounded and nonempty");
  const Interval& A = cellA.lo <= cellB.lo ? cellA : cellB;
  const Interval& B = cellA.lo <= cellB.lo ? cellB : cellA;
  if (A.hi > B.lo) throw Error(ErrorCode::InvalidCells, "cell interiors overlap");
  const double s = order.s;
  const double p = A.lo, q = A.hi, r = B.lo, u = B.hi;
  const double gap = r - q;
  if (gap == 0.0 && s >= 0.5)
    throw Error(ErrorCode::DivergentIntegral, "touching cells with s >= 1/2 have infinite interaction");

  if (gap >= 2.0 * std::max(q - p, u - r)) {
    // well separated: the closed form would cancel, the tensor rule is exact to roundoff
    const auto& g = quad::gauss_legendre(12);
    const double hx = 0.5 * (q - p), cx = 0.5 * (q + p);
    const double hy = 0.5 * (u - r), cy = 0.5 * (u + r);
    const double e = -1.0 - 2.0 * s;
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double x = cx + hx * g.nodes[i];
      double row = 0.0;
      for (std::size_t j = 0; j < g.nodes.size(); ++j) row += g.weights[j] * std::pow(cy + hy * g.nodes[j] - x, e);
      sum += g.weights[i] * row;
    }
    return sum * hx * hy;
  }
  const double e = 1.0 - 2.0 * s;
  return (quad::pow_diff(r - p, r - q, e) - quad::pow_diff(u - p, u - q, e)) / (2.0 * s);
}

double exterior_mass(double x, const Domain1D& omega, const FractionalOrder& order) {
  if (order.dimension != 1) throw Error(ErrorCode::InvalidArgument, "use the disk overload in 2D");
  const double e = -2.0 * order.s;
  if (x < omega.a) return quad::pow_diff(omega.b - x, omega.a - x, e);
  if (x > omega.b) return quad::pow_diff(x - omega.a, x - omega.b, e);
  if (x == omega.a || x == omega.b) throw Error(ErrorCode::OnBoundary, "point lies on the boundary");
  throw Error(ErrorCode::InvalidArgument, "point lies inside the domain");
}

double exterior_mass(const Interval& cell, const Domain1D& omega, const FractionalOrder& order) {
  if (cell.overlap(omega.interval()) > 0.0)
    throw Error(ErrorCode::InvalidCells, "cell intersects the domain");
  return kernel_cell_integral(cell, omega.interval(), order);
}

double exterior_mass(const Point2& x, const Disk& omega, const FractionalOrder& order, double tol) {
  const double D = std::hypot(x.x - omega.center.x, x.y - omega.center.y);
  const double rho = omega.radius;
  if (D == rho) throw Error(ErrorCode::OnBoundary, "point lies on the circle");
  if (D < rho) throw Error(ErrorCode::InvalidArgument, "point lies inside the disk");
  const double s = order.s;
  const double k = rho / D;
  // sin(theta) = k sin(phi) removes the square-root edge at the tangent rays
  auto f = [&](double phi) {
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double ct = std::sqrt(1.0 - k * k * sp * sp);
    const double mid = D * ct, half = rho * cp;
    double r1 = mid - half;
    const double r2 = mid + half;
    if (r1 <= 0.0) r1 = (D * D - rho * rho) / r2;
    const double radial = quad::pow_diff(r2, r1, -2.0 * s);
    return radial * k * cp / ct;
  };
  quad::QuadOptions o;
  o.rel_tol = tol;
  return 2.0 * quad::integrate(f, 0.0, 0.5 * pi, o);
}

double tail_mass(double R, const FractionalOrder& order) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  return sphere_measure(order.dimension) * std::pow(R, -2.0 * order.s) / (2.0 * order.s);
}

// ---------------------------------------------------------------------------

LogLogTable::LogLogTable(std::vector<double> t, std::vector<double> value) : t_(std::move(t)), v_(std::move(value)) {
  if (t_.size() != v_.size() || t_.size() < 2)
    throw Error(ErrorCode::BadParameters, "sample table needs at least two (t, value) pairs");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!(t_[i] > 0.0) || !(v_[i] > 0.0)) throw Error(ErrorCode::BadParameters, "sample table entries must be positive");
    if (i > 0 && !(t_[i] > t_[i - 1])) throw Error(ErrorCode::BadParameters, "sample abscissae must increase");
    lt_.push_back(std::log(t_[i]));
    lv_.push_back(std::log(v_[i]));
  }
}

double LogLogTable::log_eval(double x) const {
  std::size_t n = lt_.size();
  std::size_t i;
  if (x <= lt_[1]) {
    i = 0;
  } else if (x >= lt_[n - 2]) {
    i = n - 2;
  } else {
    i = static_cast<std::size_t>(std::upper_bound(lt_.begin(), lt_.end(), x) - lt_.begin()) - 1;
  }
  double slope = (lv_[i + 1] - lv_[i]) / (lt_[i + 1] - lt_[i]);
  return lv_[i] + slope * (x - lt_[i]);
}

ModulusOfContinuity ModulusOfContinuity::power(double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::BadParameters, "power modulus needs beta > 0");
  ModulusOfContinuity m;
  m.kind_ = Kind::Power;
  m.beta_ = beta;
  return m;
}

ModulusOfContinuity ModulusOfContinuity::log_spine() {
  ModulusOfContinuity m;
  m.kind_ = Kind::LogSpine;
  m.beta_ = 0.0;
  return m;
}

ModulusOfContinuity ModulusOfContinuity::user(std::vector<double> t, std::vector<double> value) {
  ModulusOfContinuity m;
  m.kind_ = Kind::User;
  m.table_ = LogLogTable(std::move(t), std::move(value));
  const auto& v = m.table_.values();
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) throw Error(ErrorCode::BadParameters, "modulus of continuity must be nondecreasing");
  if (!(v[1] > v[0])) throw Error(ErrorCode::BadParameters, "modulus must vanish at 0 (first segment is flat)");
  return m;
}

double ModulusOfContinuity::operator()(double t) const {
  if (t < 0.0) throw Error(ErrorCode::InvalidArgument, "modulus evaluated at negative argument");
  if (t == 0.0) return 0.0;
  switch (kind_) {
    case Kind::Power: return std::pow(t, beta_);
    case Kind::LogSpine: return 1.0 / (1.0 + std::log(1.0 / t));
    case Kind::User: return std::exp(table_.log_eval(std::log(t)));
  }
  return 0.0;
}

double ModulusOfContinuity::log_at_exp_neg(double v) const {
  switch (kind_) {
    case Kind::Power: return -beta_ * v;
    case Kind::LogSpine: return -std::log1p(v);
    case Kind::User: return table_.log_eval(-v);
  }
  return 0.0;
}

KernelOrder KernelOrder::power(double alpha) {
  if (!(alpha >= 0.0)) throw Error(ErrorCode::BadParameters, "kernel order exponent must be nonnegative");
  KernelOrder k;
  k.kind_ = Kind::Power;
  k.alpha_ = alpha;
  return k;
}

KernelOrder KernelOrder::user(std::vector<double> t, std::vector<double> value) {
  KernelOrder k;
  k.kind_ = Kind::User;
  k.table_ = LogLogTable(std::move(t), std::move(value));
  const auto& v = k.table_.values();
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) throw Error(ErrorCode::BadParameters, "kernel order must be nondecreasing");
  return k;
}

double KernelOrder::operator()(double t) const {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel order needs t > 0");
  if (kind_ == Kind::Power) return std::pow(t, alpha_);
  return std::exp(table_.log_eval(std::log(t)));
}

double KernelOrder::log_at_exp(double v) const {
  if (kind_ == Kind::Power) return alpha_ * v;
  return table_.log_eval(v);
}

DiniResult dini_check(const ModulusOfContinuity& omega0, const KernelOrder& psi, double tol) {
  // t = e^{-v}: the integral becomes int_0^inf g(v) dv with g(v) = omega_0(e^{-v}) Psi(e^{v})
  auto log_g = [&](double v) { return omega0.log_at_exp_neg(v) + psi.log_at_exp(v); };
  auto rate = [&](double v) {
    const double d = 1e-3 * v;
    return -(log_g(v + d) - log_g(v - d)) / (2.0 * d);
  };

  // fit rate(v) = mu0 + c / v + d / v^2
  const double vs[] = {50.0, 100.0, 200.0, 400.0, 550.0, 700.0};
  Eigen::Matrix<double, 6, 3> A;
  Eigen::Matrix<double, 6, 1> y;
  for (int i = 0; i < 6; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = 1.0 / vs[i];
    A(i, 2) = 1.0 / (vs[i] * vs[i]);
    y(i) = rate(vs[i]);
  }
  const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
  const double mu0 = coef(0), c = coef(1);

  DiniResult res;
  res.rate = mu0;
  res.log_coeff = c;
  double V = 0.0;
  bool finite = false;
  if (mu0 < -tol) {
    finite = false;
  } else if (mu0 > tol) {
    finite = true;
    V = std::clamp(45.0 / mu0, 50.0, 700.0);
  } else if (c > 1.0 + tol) {
    finite = true;
    V = 700.0;
  } else if (c <= 1.0 - tol) {
    finite = false;
  } else {
    throw Error(ErrorCode::Inconclusive, "integrand decays like 1/v at the critical rate; rate fit mu0=" +
                                             std::to_string(mu0) + ", c=" + std::to_string(c));
  }
  if (!finite) {
    res.status = DiniResult::Status::Divergent;
    return res;
  }
  quad::QuadOptions o;
  o.rel_tol = 1e-11;
  o.max_intervals = 20000;
  double head = quad::integrate([&](double v) { return std::exp(log_g(v)); }, 0.0, V, o);
  const double gV = std::exp(log_g(V));
  double tail;
  if (mu0 > tol) {
    tail = gV / rate(V);
  } else {
    tail = gV * V / (c - 1.0);
  }
  res.status = DiniResult::Status::Finite;
  res.value = head + tail;
  return res;
}

// ---------------------------------------------------------------------------

namespace {

void check_union(const std::vector<Interval>& omega) {
  if (omega.empty()) throw Error(ErrorCode::EmptySet, "domain union is empty");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!omega[i].bounded() || omega[i].empty()) throw Error(ErrorCode::InvalidArgument, "components must be bounded");
    if (i > 0 && !(omega[i].lo > omega[i - 1].hi))
      throw Error(ErrorCode::InvalidArgument, "components must be sorted and separated");
  }
}

}  // namespace

IdentityReport indicator_seminorm_identity(const std::vector<Interval>& omega, double alpha, double tol) {
  check_union(omega);
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  quad::QuadOptions o;
  o.rel_tol = std::max(0.05 * tol, 1e-13);
  o.max_intervals = 20000;

  // I at the point e + sign*d, with distances formed relative to e so that d is never absorbed
  auto I = [&](double e, double sign, double d) {
    double sum = 0.0;
    for (const auto& c : omega) {
      const double lo = (c.lo - e) - sign * d, hi = (c.hi - e) - sign * d;
      if (lo >= 0.0)
        sum += quad::pow_diff(hi, lo, -alpha);
      else
        sum += quad::pow_diff(-lo, -hi, -alpha);
    }
    return sum;
  };
  // g(d) = d^alpha * I(e + sign*d) is regular at d = 0
  auto near_end = [&](double e, double sign, double H) {
    return quad::integrate_algebraic(
        [&](double d) { return d > 0.0 ? std::pow(d, alpha) * I(e, sign, d) : 1.0 / alpha; }, H, alpha, o);
  };

  const double left = omega.front().lo, right = omega.back().hi;
  const double W = right - left;
  double lhs = 0.0;
  for (std::size_t j = 0; j + 1 < omega.size(); ++j) {
    const double H = 0.5 * (omega[j + 1].lo - omega[j].hi);
    lhs += near_end(omega[j].hi, 1.0, H) + near_end(omega[j + 1].lo, -1.0, H);
  }
  const double X = 8.0 * W;
  for (double sign : {-1.0, 1.0}) {
    const double e = sign < 0 ? left : right;
    lhs += near_end(e, sign, W);
    lhs += quad::integrate([&](double d) { return I(e, sign, d); }, W, X, o);
    const double cut = e + sign * X;
    for (const auto& c : omega) {
      if (sign < 0)
        lhs += quad::pow_diff(c.hi - cut, c.lo - cut, 1.0 - alpha) / alpha;
      else
        lhs += quad::pow_diff(cut - c.lo, cut - c.hi, 1.0 - alpha) / alpha;
    }
  }

  // J(y) = int_{complement} |x - y|^{-1-alpha} dx for y = e + sign*d inside the union
  auto J = [&](double e, double sign, double d) {
    auto off = [&](double p) { return (p - e) - sign * d; };
    double sum = std::pow(-off(left), -alpha) / alpha + std::pow(off(right), -alpha) / alpha;
    for (std::size_t j = 0; j + 1 < omega.size(); ++j) {
      const double g0 = off(omega[j].hi), g1 = off(omega[j + 1].lo);
      if (g0 >= 0.0)
        sum += quad::pow_diff(g1, g0, -alpha);
      else
        sum += quad::pow_diff(-g0, -g1, -alpha);
    }
    return sum;
  };
  double rhs = 0.0;
  for (const auto& c : omega) {
    const double H = 0.5 * c.length();
    for (auto [e, sign] : {std::pair{c.lo, 1.0}, std::pair{c.hi, -1.0}}) {
      rhs += quad::integrate_algebraic(
          [&](double d) { return d > 0.0 ? std::pow(d, alpha) * J(e, sign, d) : 1.0 / alpha; }, H, alpha, o);
    }
  }

  IdentityReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.gap = std::abs(lhs - rhs);
  if (rep.gap > tol * std::abs(lhs))
    throw Error(ErrorCode::NonConvergedQuadrature,
                "identity sides differ by " + std::to_string(rep.gap) + " (lhs " + std::to_string(lhs) + ")");
  return rep;
}

}  // namespace fraclab
