#include "fraclab/nonlocal_ops.hpp"

#include <cmath>
#include <numbers>

#include "fraclab/quadrature.hpp"

namespace fraclab {

DiscreteFunction::DiscreteFunction(std::shared_ptr<const Discretization> disc, Eigen::VectorXd coeffs)
    : disc_(std::move(disc)), coeffs_(std::move(coeffs)) {
  if (!disc_) throw Error(ErrorCode::InvalidArgument, "null discretization");
  if (coeffs_.size() != disc_->num_free())
    throw Error(ErrorCode::InvalidArgument, "coefficient count " + std::to_string(coeffs_.size()) +
                                                " does not match " + std::to_string(disc_->num_free()) + " DOFs");
}

DiscreteFunction DiscreteFunction::constant(std::shared_ptr<const Discretization> disc, double c) {
  const int n = disc->num_free();
  return DiscreteFunction(std::move(disc), Eigen::VectorXd::Constant(n, c));
}

namespace {

double coeff(const Eigen::VectorXd& c, int dof) { return dof < 0 ? 0.0 : c(dof); }

}  // namespace

double DiscreteFunction::value(double x) const {
  const Discretization& d = *disc_;
  const int nc = d.num_cells();
  const double lo = d.node(0), hi = d.node(nc);
  if (x < lo || x > hi) {
    if ((x < lo ? d.far_left : d.far_right) == CellClass::Dirichlet) return 0.0;
    throw Error(ErrorCode::InvalidArgument, "point lies in the Neumann far field, outside the mesh");
  }
  int j = static_cast<int>(std::floor((x - lo) / d.h));
  j = std::clamp(j, 0, nc - 1);
  if (d.cell_class[j] == CellClass::Dirichlet) return 0.0;
  const auto& g = d.cell_dofs[j];
  if (d.scheme == Scheme::P0) return coeff(coeffs_, g[0]);
  const double xi = std::clamp((x - d.node(j)) / d.h, 0.0, 1.0);
  return coeff(coeffs_, g[0]) * (1.0 - xi) + coeff(coeffs_, g[1]) * xi;
}

double DiscreteFunction::integral() const {
  const Discretization& d = *disc_;
  double sum = 0.0;
  for (int j = d.n_left; j < d.n_left + d.n_interior; ++j) {
    const auto& g = d.cell_dofs[j];
    if (d.scheme == Scheme::P0)
      sum += coeff(coeffs_, g[0]) * d.h;
    else
      sum += 0.5 * (coeff(coeffs_, g[0]) + coeff(coeffs_, g[1])) * d.h;
  }
  return sum;
}

double DiscreteFunction::mean() const { return integral() / disc_->omega().length(); }

double DiscreteFunction::max_abs_interior() const {
  return disc_->n_free_interior ? interior().cwiseAbs().maxCoeff() : 0.0;
}

double DiscreteFunction::kernel_integral(double x, double s) const {
  const Discretization& d = *disc_;
  const Domain1D& om = d.omega();
  if (x == om.a || x == om.b) throw Error(ErrorCode::OnBoundary, "point lies on the boundary");
  if (x > om.a && x < om.b) throw Error(ErrorCode::InvalidArgument, "point lies inside the domain");
  const bool right = x > om.b;
  const double h = d.h;
  const auto& gq = quad::gauss_legendre(8);
  double sum = 0.0;
  for (int j = d.n_left; j < d.n_left + d.n_interior; ++j) {
    const Interval c = d.cell(j);
    const auto& g = d.cell_dofs[j];
    const double r = right ? x - c.hi : c.lo - x;
    if (d.scheme == Scheme::P0) {
      sum += coeff(coeffs_, g[0]) * quad::pow_diff(r + h, r, -2.0 * s);
      continue;
    }
    const double u0 = coeff(coeffs_, g[0]), u1 = coeff(coeffs_, g[1]);
    if (r >= 4.0 * h) {
      double part = 0.0;
      for (std::size_t q = 0; q < gq.nodes.size(); ++q) {
        const double xi = 0.5 * (1.0 + gq.nodes[q]);
        const double y = c.lo + h * xi;
        part += gq.weights[q] * (u0 * (1.0 - xi) + u1 * xi) * std::pow(std::abs(x - y), -1.0 - 2.0 * s);
      }
      sum += 0.5 * h * part;
      continue;
    }
    const double un = right ? u1 : u0, uf = right ? u0 : u1;
    const double A = quad::pow_diff(r + h, r, -2.0 * s);
    const double B = quad::pow_diff(r + h, r, 1.0 - 2.0 * s) - r * A;
    sum += un * A + (uf - un) / h * B;
  }
  return sum;
}

double nonlocal_normal(const DiscreteFunction& u, double x, const FractionalOrder& order) {
  const double I = exterior_mass(x, u.disc().omega(), order);
  return order.a_ns * (u.value(x) * I - u.kernel_integral(x, order.s));
}

Eigen::VectorXd nonlocal_normal_rows(const StiffnessSystem& system, const DiscreteFunction& u) {
  return system.apply(u.coeffs()).tail(system.n_exterior());
}

double neumann_value(const DiscreteFunction& u, double x, const FractionalOrder& order) {
  return u.kernel_integral(x, order.s) / exterior_mass(x, u.disc().omega(), order);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::DegenerateData, "need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw Error(ErrorCode::DegenerateData, "log-log fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error(ErrorCode::DegenerateData, "abscissae coincide");
  return (n * sxy - sx * sy) / den;
}

FarfieldRate farfield_rate(const DiscreteFunction& u, const FractionalOrder& order, const std::vector<double>& points) {
  FarfieldRate out;
  out.points = points;
  const double m = u.mean();
  const double scale = std::max(u.max_abs_interior(), std::abs(m));
  std::vector<double> xs, ys;
  for (double x : points) {
    const double dev = std::abs(neumann_value(u, x, order) - m);
    out.deviations.push_back(dev);
    if (dev > 1e-13 * scale) {
      xs.push_back(std::abs(x));
      ys.push_back(dev);
    }
  }
  if (xs.size() < 2 || xs.size() < points.size()) {
    out.degenerate = true;
    out.slope = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.slope = loglog_slope(xs, ys);
  return out;
}

double gauss_residual(const StiffnessSystem& system, const DiscreteFunction& u) {
  return std::abs(system.apply(u.coeffs()).sum());
}

double parts_residual(const StiffnessSystem& system, const DiscreteFunction& u, const DiscreteFunction& v) {
  const int nI = system.n_interior(), nE = system.n_exterior();
  const Eigen::VectorXd Ku = system.apply(u.coeffs());
  const Eigen::VectorXd Kv = system.apply(v.coeffs());
  const double bilinear = u.coeffs().dot(Kv);
  const double inside = v.coeffs().head(nI).dot(Ku.head(nI));
  const double outside = v.coeffs().tail(nE).dot(Ku.tail(nE));
  return std::abs(bilinear - inside - outside);
}

double phi_potential(const DiscreteFunction& phi, double x, const FractionalOrder& order) {
  return phi.kernel_integral(x, order.s);
}

std::vector<IntegrabilityRow> phi_integrability(const DiscreteFunction& phi, const FractionalOrder& order,
                                                const std::vector<double>& radii) {
  const Discretization& d = phi.disc();
  const Domain1D& om = d.omega();
  const double s = order.s;
  const double rho = std::max(std::abs(om.a), std::abs(om.b));
  quad::QuadOptions o;
  o.rel_tol = 1e-10;
  std::vector<IntegrabilityRow> rows;
  const double mass = phi.integral();
  for (double R : radii) {
    if (!(R > rho)) throw Error(ErrorCode::InvalidArgument, "ball must contain the domain");
    // int_{-R}^{a} + int_{b}^{R} of |x - y|^{-1-2s} dx, as a function of y in Omega
    auto G = [&](double y) {
      return quad::pow_diff(y + R, y - om.a, -2.0 * s) + quad::pow_diff(R - y, om.b - y, -2.0 * s);
    };
    double total = 0.0;
    for (int j = d.n_left; j < d.n_left + d.n_interior; ++j) {
      const Interval c = d.cell(j);
      const bool at_a = j == d.n_left, at_b = j == d.n_left + d.n_interior - 1;
      if (!at_a && !at_b) {
        total += quad::integrate([&](double y) { return phi.value(y) * G(y); }, c.lo, c.hi, o);
        continue;
      }
      auto endpoint_piece = [&](double e, double sign, double H) {
        const double ue = phi.value(e + sign * 0.0);
        const bool vanishes = d.scheme == Scheme::P1 && d.cell_dofs[j][sign > 0 ? 0 : 1] < 0;
        const double alpha = (vanishes || ue == 0.0) ? 2.0 * s - 1.0 : 2.0 * s;
        if (alpha >= 1.0) throw Error(ErrorCode::DivergentIntegral, "potential is not integrable at the boundary");
        return quad::integrate_algebraic(
            [&](double t) { return t > 0.0 ? std::pow(t, alpha) * phi.value(e + sign * t) * G(e + sign * t) : 0.0; },
            H, alpha, o);
      };
      if (at_a && at_b) {
        total += endpoint_piece(om.a, 1.0, 0.5 * d.h) + endpoint_piece(om.b, -1.0, 0.5 * d.h);
      } else if (at_a) {
        total += endpoint_piece(om.a, 1.0, d.h);
      } else {
        total += endpoint_piece(om.b, -1.0, d.h);
      }
    }
    rows.push_back({R, total, tail_mass(R - rho, order) * std::abs(mass)});
  }
  return rows;
}

double e_of_r(double r, double s, int dimension, double tol) {
  if (dimension != 1 && dimension != 2) throw Error(ErrorCode::InvalidArgument, "dimension must be 1 or 2");
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidArgument, "s must lie in (0, 1)");
  const double N = dimension;
  if (s >= (N + 1.0) / 4.0)
    throw Error(ErrorCode::DivergentIntegral, "dist^{-2s} is not integrable over a tangent ball when s >= (N+1)/4");
  const double slice_exp = 0.5 * (N - 1.0);
  const double V = dimension == 1 ? 1.0 : 2.0;  // volume of the unit ball in R^{N-1}
  quad::QuadOptions o;
  o.rel_tol = tol;
  // near the tangency: x^{-2s} (2rx - x^2)^{(N-1)/2} = x^{-(2s - (N-1)/2)} (2r - x)^{(N-1)/2}
  const double alpha = 2.0 * s - slice_exp;
  double near = quad::integrate_algebraic([&](double x) { return V * std::pow(2.0 * r - x, slice_exp); }, r, alpha, o);
  // far half, x = 2r - w^2
  double far = quad::integrate(
      [&](double w) {
        const double x = 2.0 * r - w * w;
        return std::pow(x, -2.0 * s) * V * std::pow(x, slice_exp) * std::pow(w, N - 1.0) * 2.0 * w;
      },
      0.0, std::sqrt(r), o);
  return near + far;
}

namespace {

double cell_value(const Discretization& d, const Eigen::VectorXd& u, int j, double x) {
  if (d.cell_class[j] == CellClass::Dirichlet) return 0.0;
  const auto& g = d.cell_dofs[j];
  auto c = [&](int k) { return k < 0 ? 0.0 : u(k); };
  if (d.scheme == Scheme::P0) return c(g[0]);
  const Interval iv = d.cell(j);
  const double xi = (x - iv.lo) / (iv.hi - iv.lo);
  return c(g[0]) * (1.0 - xi) + c(g[1]) * xi;
}

// int_A int_B |x - y|^{-1-2s} for separated or touching cells, s < 1/2 when touching.
double pair_integral(const Interval& A, const Interval& B, double s) {
  const double q = 1.0 - 2.0 * s;
  auto G = [&](double t) { return t <= 0.0 ? 0.0 : std::pow(t, q); };
  const Interval& L = A.lo < B.lo ? A : B;
  const Interval& R = A.lo < B.lo ? B : A;
  return (G(R.lo - L.lo) - G(R.lo - L.hi) - G(R.hi - L.lo) + G(R.hi - L.hi)) / (2.0 * s * q);
}

// Half-line integral int_cell int_{y < c} |x - y|^{-1-2s} dy dx with c to the left of the cell.
double half_line_left(const Interval& cell, double c, double s) {
  const double q = 1.0 - 2.0 * s;
  return (std::pow(cell.hi - c, q) - std::pow(cell.lo - c, q)) / (2.0 * s * q);
}

// P0 energy as the explicit double sum over ordered cell pairs not both outside Omega.
double p0_energy(const Discretization& d, const FractionalOrder& o, const Eigen::VectorXd& u) {
  const int nc = d.num_cells();
  std::vector<double> val(nc);
  for (int j = 0; j < nc; ++j) val[j] = cell_value(d, u, j, 0.0);
  double e = 0.0;
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) {
      if (i == j || (!d.in_omega(i) && !d.in_omega(j))) continue;
      const double diff = val[i] - val[j];
      if (diff != 0.0) e += 0.5 * o.a_ns * diff * diff * pair_integral(d.cell(i), d.cell(j), o.s);
    }
  const double cl = d.node(0), cr = d.node(nc);
  for (int i = d.n_left; i < d.n_left + d.n_interior; ++i) {
    const Interval c = d.cell(i);
    double t = 0.0;
    if (d.far_left == CellClass::Dirichlet) t += half_line_left(c, cl, o.s);
    if (d.far_right == CellClass::Dirichlet) t += half_line_left({-c.hi, -c.lo}, -cr, o.s);
    e += o.a_ns * val[i] * val[i] * t;
  }
  return e;
}

// P1 energy: inner integrals over y in closed form, outer integrals by adaptive quadrature.
double p1_energy(const Discretization& d, const FractionalOrder& o, const Eigen::VectorXd& u,
                        double tol = 1e-12) {
  quad::QuadOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = 1e-17;
  opt.max_intervals = 20000;
  const double s = o.s;
  const int nc = d.num_cells();
  // int over t in (t0, t1) of (A - m t)^2 t^{-1-2s}
  auto moment = [&](double A, double m, double t0, double t1) {
    double v = 0.0;
    if (A != 0.0) v += A * A * quad::pow_diff(t1, t0, -2.0 * s) - 2.0 * A * m * quad::pow_diff(t1, t0, 1.0 - 2.0 * s);
    if (m != 0.0) v += m * m * quad::pow_diff(t1, t0, 2.0 - 2.0 * s);
    return v;
  };
  auto pair = [&](int i, int j) {
    const Interval A = d.cell(i), B = d.cell(j);
    const double slope = (cell_value(d, u, j, B.hi) - cell_value(d, u, j, B.lo)) / (B.hi - B.lo);
    auto outer = [&](double x) {
      const double ux = cell_value(d, u, i, x);
      const double ext = cell_value(d, u, j, x);  // linear extension of cell j evaluated at x
      const double gap = ux - ext;
      if (i == j) return moment(0.0, slope, 0.0, x - B.lo) + moment(0.0, slope, 0.0, B.hi - x);
      if (B.lo >= A.hi) return moment(gap, slope, B.lo - x, B.hi - x);
      return moment(gap, -slope, x - B.hi, x - B.lo);
    };
    return quad::integrate(outer, A.lo, A.hi, opt);
  };
  double e = 0.0;
  for (int i = d.n_left; i < d.n_left + d.n_interior; ++i)
    for (int j = 0; j < nc; ++j) e += (d.in_omega(j) ? 0.5 : 1.0) * o.a_ns * pair(i, j);
  const double cl = d.node(0), cr = d.node(nc);
  for (int i = d.n_left; i < d.n_left + d.n_interior; ++i) {
    const Interval c = d.cell(i);
    auto f = [&](double x) {
      const double ux = cell_value(d, u, i, x);
      double t = 0.0;
      if (d.far_left == CellClass::Dirichlet) t += std::pow(x - cl, -2.0 * s) / (2.0 * s);
      if (d.far_right == CellClass::Dirichlet) t += std::pow(cr - x, -2.0 * s) / (2.0 * s);
      return ux * ux * t;
    };
    e += o.a_ns * quad::integrate(f, c.lo, c.hi, opt);
  }
  return e;
}

}  // namespace

double energy_by_quadrature(const DiscreteFunction& u, const FractionalOrder& order, double tol) {
  const Discretization& d = u.disc();
  if (d.num_cells() > 40) throw Error(ErrorCode::InvalidArgument, "quadrature oracle is limited to 40 cells");
  if (d.scheme == Scheme::P0) return p0_energy(d, order, u.coeffs());
  return p1_energy(d, order, u.coeffs(), tol);
}

}  // namespace fraclab
