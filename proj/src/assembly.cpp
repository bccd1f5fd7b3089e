#include "fraclab/assembly.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/quadrature.hpp"

namespace fraclab {

Scheme scheme_from_string(const std::string& name) {
  if (name == "P0" || name == "p0") return Scheme::P0;
  if (name == "P1" || name == "p1") return Scheme::P1;
  throw Error(ErrorCode::BadParameters, "unknown scheme '" + name + "'");
}

std::string to_string(Scheme scheme) { return scheme == Scheme::P0 ? "P0" : "P1"; }

double Discretization::node(int i) const {
  const double a = omega().a, b = omega().b;
  if (i <= n_left) return a - (n_left - i) * h;
  if (i >= n_left + n_interior) return b + (i - n_left - n_interior) * h;
  return a + (i - n_left) * h;
}

double Discretization::max_snap() const {
  double m = 0.0;
  for (const auto& r : snaps) m = std::max(m, std::abs(r.snapped - r.original));
  return m;
}

namespace {

CellClass far_label(const ExteriorPartition& p, const Interval& region) {
  double d = 0.0, n = 0.0;
  for (const auto& iv : p.dirichlet.intervals()) d += iv.overlap(region);
  for (const auto& iv : p.neumann.intervals()) n += iv.overlap(region);
  if (d > 0.0 && n > 0.0)
    throw Error(ErrorCode::MixedFarField, "both Dirichlet and Neumann pieces lie beyond the truncation radius");
  return n > 0.0 ? CellClass::Neumann : CellClass::Dirichlet;
}

}  // namespace

Discretization build_mesh(const ExteriorPartition& partition, const FractionalOrder& order, double h, double L,
                          Scheme scheme) {
  partition.validate();
  if (order.dimension != 1) throw Error(ErrorCode::InvalidArgument, "meshes are one-dimensional");
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::BadParameters, "mesh size must be positive");
  const Domain1D& om = partition.omega;
  if (!(L >= 4.0 * om.length() * (1.0 - 1e-12)) || !std::isfinite(L))
    throw Error(ErrorCode::BadParameters, "truncation radius must be at least 4|Omega|");
  if (scheme == Scheme::P0 && order.s >= 0.5)
    throw Error(ErrorCode::IncompatibleScheme, "piecewise constants need s < 1/2");

  Discretization d;
  d.partition = partition;
  d.scheme = scheme;
  d.n_interior = std::max(1, static_cast<int>(std::ceil(om.length() / h - 1e-9)));
  d.h = om.length() / d.n_interior;
  d.n_left = d.n_right = static_cast<int>(std::ceil(L / d.h - 1e-9));
  d.L = d.n_left * d.h;
  const double lo = om.a - d.L, hi = om.b + d.L;

  d.far_left = far_label(partition, {-kInf, lo});
  d.far_right = far_label(partition, {hi, kInf});

  // features that reach the collar must span four cells
  for (const auto* set : {&partition.dirichlet, &partition.neumann}) {
    for (const auto& iv : set->intervals()) {
      if (iv.overlap({lo, hi}) > 0.0 && iv.length() < 4.0 * d.h * (1.0 - 1e-9))
        throw Error(ErrorCode::UnresolvedFeature, "exterior piece of length " + std::to_string(iv.length()) +
                                                      " is below four cells of size " + std::to_string(d.h));
    }
  }

  auto snap = [&](double x) {
    if (!std::isfinite(x) || x < lo || x > hi) return x;
    int i;
    if (x <= om.a)
      i = d.n_left - static_cast<int>(std::lround((om.a - x) / d.h));
    else if (x >= om.b)
      i = d.n_left + d.n_interior + static_cast<int>(std::lround((x - om.b) / d.h));
    else
      return x;
    double y = d.node(i);
    if (y != x) d.snaps.push_back({x, y});
    return y;
  };
  auto snapped = [&](const ExteriorSet& set) {
    std::vector<Interval> out;
    for (const auto& iv : set.intervals()) out.push_back({snap(iv.lo), snap(iv.hi)});
    return out;
  };
  const std::vector<Interval> D = snapped(partition.dirichlet);
  const std::vector<Interval> N = snapped(partition.neumann);
  std::sort(d.snaps.begin(), d.snaps.end(), [](const SnapRecord& x, const SnapRecord& y) { return x.original < y.original; });
  d.snaps.erase(std::unique(d.snaps.begin(), d.snaps.end(),
                            [](const SnapRecord& x, const SnapRecord& y) { return x.original == y.original; }),
                d.snaps.end());

  const int nc = d.n_left + d.n_interior + d.n_right;
  d.cell_class.resize(nc);
  for (int j = 0; j < nc; ++j) {
    if (d.in_omega(j)) {
      d.cell_class[j] = CellClass::Interior;
      continue;
    }
    const double m = 0.5 * (d.node(j) + d.node(j + 1));
    bool inN = std::any_of(N.begin(), N.end(), [m](const Interval& iv) { return iv.contains(m); });
    bool inD = std::any_of(D.begin(), D.end(), [m](const Interval& iv) { return iv.contains(m); });
    if (inN == inD) throw Error(ErrorCode::BadParameters, "cell at " + std::to_string(m) + " is not singly labeled");
    d.cell_class[j] = inN ? CellClass::Neumann : CellClass::Dirichlet;
  }

  d.cell_dofs.assign(nc, {-1, -1});
  if (scheme == Scheme::P0) {
    int next = 0;
    for (int j = d.n_left; j < d.n_left + d.n_interior; ++j) {
      d.cell_dofs[j][0] = next++;
      d.dof_coord.push_back(0.5 * (d.node(j) + d.node(j + 1)));
    }
    d.n_free_interior = next;
    for (int j = 0; j < nc; ++j) {
      if (d.cell_class[j] != CellClass::Neumann) continue;
      d.cell_dofs[j][0] = next++;
      d.dof_coord.push_back(0.5 * (d.node(j) + d.node(j + 1)));
    }
    d.n_free_exterior = next - d.n_free_interior;
    return d;
  }

  // P1: nodes of the closed domain first
  std::vector<int> node_dof(d.n_interior + 1, -1);
  const bool pin_a = d.cell_class[d.n_left - 1] == CellClass::Dirichlet;
  const bool pin_b = d.cell_class[d.n_left + d.n_interior] == CellClass::Dirichlet;
  int next = 0;
  for (int k = 0; k <= d.n_interior; ++k) {
    if ((k == 0 && pin_a) || (k == d.n_interior && pin_b)) continue;
    node_dof[k] = next++;
    d.dof_coord.push_back(d.node(d.n_left + k));
  }
  d.n_free_interior = next;
  for (int j = d.n_left; j < d.n_left + d.n_interior; ++j)
    d.cell_dofs[j] = {node_dof[j - d.n_left], node_dof[j - d.n_left + 1]};
  for (int j = 0; j < nc; ++j) {
    if (d.cell_class[j] != CellClass::Neumann) continue;
    for (int slot = 0; slot < 2; ++slot) {
      const int nd = j + slot;
      if (nd == d.n_left) {
        d.cell_dofs[j][slot] = node_dof[0];
      } else if (nd == d.n_left + d.n_interior) {
        d.cell_dofs[j][slot] = node_dof[d.n_interior];
      } else {
        d.cell_dofs[j][slot] = next++;
        d.dof_coord.push_back(d.node(nd));
      }
    }
  }
  d.n_free_exterior = next - d.n_free_interior;
  return d;
}

// ---------------------------------------------------------------------------

namespace reference {

double p0_offset(int d, double s) {
  FractionalOrder o;
  o.dimension = 1;
  o.s = s;
  const double x = std::abs(d);
  return kernel_cell_integral({0.0, 1.0}, {x, x + 1.0}, o);
}

Eigen::Matrix4d p1_separated(int d, double s, int points) {
  if (std::abs(d) < 2) throw Error(ErrorCode::InvalidArgument, "separated table needs |d| >= 2");
  const auto& g = quad::gauss_legendre(points);
  Eigen::Matrix4d W = Eigen::Matrix4d::Zero();
  const double e = -1.0 - 2.0 * s;
  for (int i = 0; i < points; ++i) {
    const double xi = 0.5 * (1.0 + g.nodes[i]);
    for (int j = 0; j < points; ++j) {
      const double eta = 0.5 * (1.0 + g.nodes[j]);
      const double w = 0.25 * g.weights[i] * g.weights[j] * std::pow(std::abs(d + eta - xi), e);
      const Eigen::Vector4d l(1.0 - xi, xi, 1.0 - eta, eta);
      W.noalias() += w * l * l.transpose();
    }
  }
  return W;
}

Eigen::Matrix2d p1_touching(double s) {
  const auto& g = quad::gauss_legendre(20);
  double I[3] = {0, 0, 0};
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double w = 0.5 * (1.0 + g.nodes[i]);
    const double k = 0.5 * g.weights[i] * std::pow(1.0 + w, -1.0 - 2.0 * s);
    I[0] += k;
    I[1] += k * w;
    I[2] += k * w * w;
  }
  const double c = 1.0 / (3.0 - 2.0 * s);
  Eigen::Matrix2d T;
  T << c * (I[0] + I[2]), 2.0 * c * I[1], 2.0 * c * I[1], c * (I[0] + I[2]);
  return T;
}

double p1_self(double s) { return 2.0 / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s)); }

}  // namespace reference

namespace {

struct Scatter {
  int nI;
  StiffnessSystem& sys;

  template <int n>
  void add(const int (&g)[n], const Eigen::Matrix<double, n, n>& loc) {
    for (int a = 0; a < n; ++a) {
      const int p = g[a];
      if (p < 0) continue;
      for (int b = 0; b < n; ++b) {
        const int q = g[b];
        if (q < 0) continue;
        const double v = loc(a, b);
        if (p < nI && q < nI) {
          sys.K_II(p, q) += v;
        } else if (p < nI) {
          sys.K_IE(p, q - nI) += v;
        } else if (q < nI) {
          continue;  // transpose of K_IE
        } else if (p == q) {
          sys.K_EE_diag(p - nI) += v;
        } else if (q == p + 1) {
          sys.K_EE_off(p - nI) += v;
        } else if (p != q + 1) {
          throw Error(ErrorCode::InvalidArgument, "exterior coupling outside a single cell");
        }
      }
    }
  }
};

}  // namespace

StiffnessSystem assemble(std::shared_ptr<const Discretization> disc_ptr, const FractionalOrder& order) {
  if (!disc_ptr) throw Error(ErrorCode::InvalidArgument, "null discretization");
  const Discretization& d = *disc_ptr;
  const double s = order.s;
  if (d.scheme == Scheme::P0 && s >= 0.5)
    throw Error(ErrorCode::DivergentEntry, "touching piecewise-constant cells diverge for s >= 1/2");
  const double a = order.a_ns;
  const double h = d.h;
  const double hs = std::pow(h, 1.0 - 2.0 * s);
  const int nI = d.n_free_interior, nE = d.n_free_exterior;
  const int nc = d.num_cells();

  StiffnessSystem sys;
  sys.disc = disc_ptr;
  sys.order = order;
  sys.K_II = Eigen::MatrixXd::Zero(nI, nI);
  sys.K_IE = Eigen::MatrixXd::Zero(nI, nE);
  sys.K_EE_diag = Eigen::VectorXd::Zero(nE);
  sys.K_EE_off = Eigen::VectorXd::Zero(std::max(nE - 1, 0));
  sys.M = Eigen::MatrixXd::Zero(nI, nI);
  sys.tail_corrections = Eigen::VectorXd::Zero(nI);
  Scatter sc{nI, sys};

  const double c_left = d.node(0), c_right = d.node(nc);
  const int first = d.n_left, last = d.n_left + d.n_interior;  // Omega cells [first, last)

  auto record_tail = [&](int g, double v) {
    if (g >= 0 && g < nI) sys.tail_corrections(g) += v;
  };

  if (d.scheme == Scheme::P0) {
    std::vector<double> kappa(nc + 1, 0.0);
    for (int off = 1; off <= nc; ++off) kappa[off] = hs * reference::p0_offset(off, s);
    for (int E = first; E < last; ++E) {
      const int gE = d.cell_dofs[E][0];
      for (int F = 0; F < nc; ++F) {
        if (F == E || (d.in_omega(F) && F < E)) continue;
        const double kc = a * kappa[std::abs(F - E)];
        const int g[2] = {gE, d.cell_dofs[F][0]};
        Eigen::Matrix2d loc;
        loc << kc, -kc, -kc, kc;
        sc.add(g, loc);
        if (d.cell_class[F] == CellClass::Dirichlet) record_tail(gE, kc);
      }
      const Interval ce = d.cell(E);
      double tail = 0.0;
      if (d.far_left == CellClass::Dirichlet)
        tail += quad::pow_diff(ce.hi - c_left, ce.lo - c_left, 1.0 - 2.0 * s) / (2.0 * s);
      if (d.far_right == CellClass::Dirichlet)
        tail += quad::pow_diff(c_right - ce.lo, c_right - ce.hi, 1.0 - 2.0 * s) / (2.0 * s);
      sys.K_II(gE, gE) += a * tail;
      record_tail(gE, a * tail);
      sys.M(gE, gE) = h;
    }
    return sys;
  }

  // P1
  const Eigen::Matrix4d W2 = reference::p1_separated(2, s, 16);
  const Eigen::Matrix4d W2fine = reference::p1_separated(2, s, 24);
  if ((W2 - W2fine).cwiseAbs().maxCoeff() > 1e-8 * W2fine.cwiseAbs().maxCoeff())
    throw Error(ErrorCode::EntryToleranceFailure, "separated cell rule failed its refinement check");

  const Eigen::Vector4d S(1.0, 1.0, -1.0, -1.0);
  std::vector<Eigen::Matrix4d> sep(nc + 1);
  for (int off = 2; off <= nc; ++off)
    sep[off] = hs * (S.asDiagonal() * reference::p1_separated(off, s) * S.asDiagonal());

  Eigen::Matrix<double, 2, 4> C;
  C << 1, -1, 0, 0, 0, 0, 1, -1;
  const Eigen::Matrix4d touch = hs * (C.transpose() * reference::p1_touching(s) * C);
  Eigen::Matrix2d self;
  self << 1, -1, -1, 1;
  self *= 0.5 * a * hs * reference::p1_self(s);

  const auto& gq = quad::gauss_legendre(20);
  Eigen::Matrix2d mass;
  mass << 2, 1, 1, 2;
  mass *= h / 6.0;

  for (int E = first; E < last; ++E) {
    {
      const int g[2] = {d.cell_dofs[E][0], d.cell_dofs[E][1]};
      sc.add(g, self);
      for (int x = 0; x < 2; ++x) {
        if (g[x] < 0) continue;
        for (int y = 0; y < 2; ++y)
          if (g[y] >= 0) sys.M(g[x], g[y]) += mass(x, y);
      }
    }
    for (int F = 0; F < nc; ++F) {
      if (F == E || (d.in_omega(F) && F < E)) continue;
      const int P = std::min(E, F), Q = std::max(E, F);
      const int g[4] = {d.cell_dofs[P][0], d.cell_dofs[P][1], d.cell_dofs[Q][0], d.cell_dofs[Q][1]};
      const Eigen::Matrix4d loc = a * (Q - P == 1 ? touch : sep[Q - P]);
      sc.add(g, loc);
      if (d.cell_class[F] == CellClass::Dirichlet) {
        const int o = E < F ? 0 : 2;
        record_tail(g[o], loc(o, o));
        record_tail(g[o + 1], loc(o + 1, o + 1));
      }
    }
    const Interval ce = d.cell(E);
    Eigen::Matrix2d tl = Eigen::Matrix2d::Zero();
    for (std::size_t q = 0; q < gq.nodes.size(); ++q) {
      const double xi = 0.5 * (1.0 + gq.nodes[q]);
      const double x = ce.lo + h * xi;
      double T = 0.0;
      if (d.far_left == CellClass::Dirichlet) T += std::pow(x - c_left, -2.0 * s) / (2.0 * s);
      if (d.far_right == CellClass::Dirichlet) T += std::pow(c_right - x, -2.0 * s) / (2.0 * s);
      const Eigen::Vector2d l(1.0 - xi, xi);
      tl.noalias() += (0.5 * h * gq.weights[q] * T) * l * l.transpose();
    }
    tl *= a;
    const int g[2] = {d.cell_dofs[E][0], d.cell_dofs[E][1]};
    sc.add(g, tl);
    record_tail(g[0], tl(0, 0));
    record_tail(g[1], tl(1, 1));
  }
  return sys;
}

Eigen::MatrixXd StiffnessSystem::full() const {
  const int nI = n_interior(), nE = n_exterior();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nI + nE, nI + nE);
  K.topLeftCorner(nI, nI) = K_II;
  K.topRightCorner(nI, nE) = K_IE;
  K.bottomLeftCorner(nE, nI) = K_IE.transpose();
  for (int i = 0; i < nE; ++i) {
    K(nI + i, nI + i) = K_EE_diag(i);
    if (i + 1 < nE) {
      K(nI + i, nI + i + 1) = K_EE_off(i);
      K(nI + i + 1, nI + i) = K_EE_off(i);
    }
  }
  return K;
}

Eigen::VectorXd StiffnessSystem::apply(const Eigen::VectorXd& u) const {
  const int nI = n_interior(), nE = n_exterior();
  if (u.size() != nI + nE) throw Error(ErrorCode::InvalidArgument, "vector length does not match the DOF count");
  Eigen::VectorXd out(nI + nE);
  const auto uI = u.head(nI);
  const auto uE = u.tail(nE);
  out.head(nI) = K_II * uI + K_IE * uE;
  Eigen::VectorXd e = K_IE.transpose() * uI;
  for (int i = 0; i < nE; ++i) {
    e(i) += K_EE_diag(i) * uE(i);
    if (i + 1 < nE) {
      e(i) += K_EE_off(i) * uE(i + 1);
      e(i + 1) += K_EE_off(i) * uE(i);
    }
  }
  out.tail(nE) = e;
  return out;
}

}  // namespace fraclab
