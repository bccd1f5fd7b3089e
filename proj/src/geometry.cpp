#include "fraclab/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/quadrature.hpp"

namespace fraclab {

ExteriorSet::ExteriorSet(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi)) throw Error(ErrorCode::BadParameters, "interval endpoint is NaN");
    if (!iv.empty()) intervals_.push_back(iv);
  }
  std::sort(intervals_.begin(), intervals_.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    if (intervals_[i].lo < intervals_[i - 1].hi)
      throw Error(ErrorCode::BadParameters, "intervals of an exterior set must be disjoint");
  }
}

double ExteriorSet::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals_) m += iv.length();
  return m;
}

bool ExteriorSet::contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(), [x](const Interval& iv) { return iv.contains(x); });
}

bool ExteriorSet::contains(const ExteriorSet& other) const {
  for (const auto& o : other.intervals_) {
    // touching pieces of this set cover o when chained
    double reach = o.lo;
    bool covered = false;
    for (const auto& iv : intervals_) {
      if (iv.lo <= reach && iv.hi > reach) reach = iv.hi;
      if (reach >= o.hi) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

double ExteriorSet::overlap(const ExteriorSet& other) const {
  double m = 0.0;
  for (const auto& x : intervals_)
    for (const auto& y : other.intervals_) m += x.overlap(y);
  return m;
}

ExteriorSet ExteriorSet::complement(const Domain1D& omega) const {
  std::vector<Interval> out;
  for (Interval side : {Interval{-kInf, omega.a}, Interval{omega.b, kInf}}) {
    double cursor = side.lo;
    for (const auto& iv : intervals_) {
      Interval c = iv.clip(side.lo, side.hi);
      if (c.empty()) continue;
      if (c.lo > cursor) out.push_back({cursor, c.lo});
      cursor = std::max(cursor, c.hi);
    }
    if (cursor < side.hi) out.push_back({cursor, side.hi});
  }
  return ExteriorSet(std::move(out));
}

ExteriorSet ExteriorSet::united(const ExteriorSet& other) const {
  std::vector<Interval> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  std::sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  std::vector<Interval> merged;
  for (const auto& iv : all) {
    if (!merged.empty() && iv.lo < merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, iv.hi);
    } else {
      merged.push_back(iv);
    }
  }
  return ExteriorSet(std::move(merged));
}

void ExteriorPartition::validate() const {
  const Interval in = omega.interval();
  for (const auto* set : {&dirichlet, &neumann}) {
    for (const auto& iv : set->intervals())
      if (iv.overlap(in) > 0.0) throw Error(ErrorCode::BadParameters, "exterior set meets the domain");
  }
  if (dirichlet.overlap(neumann) > 0.0) throw Error(ErrorCode::BadParameters, "Dirichlet and Neumann sets overlap");
  ExteriorSet rest = dirichlet.united(neumann).complement(omega);
  if (!rest.empty()) throw Error(ErrorCode::BadParameters, "Dirichlet and Neumann sets leave part of the complement");
}

ExteriorPartition ExteriorPartition::with_dirichlet(const Domain1D& omega, const ExteriorSet& D) {
  ExteriorPartition p{omega, D, D.complement(omega)};
  p.validate();
  return p;
}

ExteriorPartition ExteriorPartition::with_neumann(const Domain1D& omega, const ExteriorSet& N) {
  ExteriorPartition p{omega, N.complement(omega), N};
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------

namespace {

struct KindName {
  FamilyKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {FamilyKind::ShrinkingNeumann, "shrinking_neumann"},
    {FamilyKind::NestedNeumann, "nested_neumann"},
    {FamilyKind::TravelingBall, "traveling_ball"},
    {FamilyKind::TravelingRing, "traveling_ring"},
    {FamilyKind::TravelingStrip, "traveling_strip"},
    {FamilyKind::InfiniteSector, "infinite_sector"},
    {FamilyKind::ShrinkingDirichletTouching, "shrinking_dirichlet_touching"},
    {FamilyKind::ShrinkingDirichletInterior, "shrinking_dirichlet_interior"},
    {FamilyKind::TravelingDirichlet, "traveling_dirichlet"},
};

}  // namespace

FamilyKind family_kind_from_string(const std::string& name) {
  for (const auto& kn : kKindNames)
    if (name == kn.name) return kn.kind;
  throw Error(ErrorCode::BadParameters, "unknown family kind '" + name + "'");
}

std::string to_string(FamilyKind kind) {
  for (const auto& kn : kKindNames)
    if (kind == kn.kind) return kn.name;
  return "unknown";
}

bool PartitionFamily::designates_neumann() const {
  switch (kind) {
    case FamilyKind::ShrinkingDirichletTouching:
    case FamilyKind::ShrinkingDirichletInterior:
    case FamilyKind::TravelingDirichlet:
      return false;
    default:
      return true;
  }
}

double PartitionFamily::parameter(int k) const {
  switch (kind) {
    case FamilyKind::TravelingBall:
    case FamilyKind::TravelingRing:
    case FamilyKind::TravelingStrip:
    case FamilyKind::InfiniteSector:
    case FamilyKind::TravelingDirichlet:
      return base * std::pow(ratio, k);
    default:
      return length * std::pow(ratio, k);
  }
}

ExteriorPartition generate(const PartitionFamily& f, int k) {
  if (k < 0) throw Error(ErrorCode::BadParameters, "family index must be nonnegative");
  if (!(f.ratio > 0.0) || !(f.length > 0.0) || !(f.base >= 0.0))
    throw Error(ErrorCode::BadParameters, "family needs ratio > 0, length > 0, base >= 0");
  if (f.anchor != "boundary" && f.anchor != "origin")
    throw Error(ErrorCode::BadParameters, "anchor must be 'boundary' or 'origin'");
  if (f.side != "right" && f.side != "left") throw Error(ErrorCode::BadParameters, "side must be 'right' or 'left'");

  const Domain1D& om = f.omega;
  const bool left = f.side == "left";
  const double size = f.length * std::pow(f.ratio, k);
  const double off = f.base * std::pow(f.ratio, k);
  const double right_anchor = f.anchor == "boundary" ? om.b : 0.0;
  const double left_anchor = f.anchor == "boundary" ? om.a : 0.0;
  auto moving = [&](double len) {
    return left ? Interval{left_anchor - off - len, left_anchor - off} : Interval{right_anchor + off, right_anchor + off + len};
  };

  std::vector<Interval> set;
  switch (f.kind) {
    case FamilyKind::ShrinkingNeumann:
    case FamilyKind::ShrinkingDirichletInterior:
      set.push_back({f.position - 0.5 * size, f.position + 0.5 * size});
      break;
    case FamilyKind::NestedNeumann:
      set.push_back({f.position, f.position + size});
      break;
    case FamilyKind::TravelingBall:
    case FamilyKind::TravelingDirichlet:
      set.push_back(moving(f.length));
      break;
    case FamilyKind::TravelingStrip:
    case FamilyKind::InfiniteSector:
      set.push_back(moving(f.kind == FamilyKind::InfiniteSector ? kInf : f.length));
      break;
    case FamilyKind::TravelingRing:
      set.push_back({left_anchor - off - f.length, left_anchor - off});
      set.push_back({right_anchor + off, right_anchor + off + f.length});
      break;
    case FamilyKind::ShrinkingDirichletTouching:
      set.push_back(left ? Interval{om.a - size, om.a} : Interval{om.b, om.b + size});
      break;
  }
  for (const auto& iv : set) {
    if (iv.overlap(om.interval()) > 0.0)
      throw Error(ErrorCode::BadParameters, to_string(f.kind) + " set at k=" + std::to_string(k) + " overlaps the domain");
  }
  ExteriorSet designated(std::move(set));
  return f.designates_neumann() ? ExteriorPartition::with_neumann(om, designated)
                                : ExteriorPartition::with_dirichlet(om, designated);
}

double measure_in_ball(const ExteriorSet& set, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
  double m = 0.0;
  for (const auto& iv : set.intervals()) m += iv.overlap({-R, R});
  return m;
}

DiffusionReport diffusion_report(const PartitionFamily& family, const std::vector<double>& radii,
                                 const std::vector<int>& ks, double threshold_fraction) {
  if (radii.empty() || ks.empty()) throw Error(ErrorCode::InvalidArgument, "diffusion report needs radii and indices");
  DiffusionReport rep;
  rep.radii = radii;
  rep.ks = ks;
  for (double R : radii) rep.thresholds.push_back(threshold_fraction * 2.0 * R);
  for (int k : ks) {
    ExteriorPartition p = generate(family, k);
    std::vector<double> row;
    for (double R : radii) row.push_back(measure_in_ball(p.neumann, R));
    rep.measures.push_back(std::move(row));
  }
  rep.diffusing = true;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    for (std::size_t i = 1; i < ks.size(); ++i)
      if (rep.measures[i][j] > rep.measures[i - 1][j]) rep.diffusing = false;
    if (rep.measures.back()[j] > rep.thresholds[j]) rep.diffusing = false;
  }
  return rep;
}

double separation(const ExteriorSet& set, const Domain1D& omega) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "separation of an empty set");
  double d = kInf;
  for (const auto& iv : set.intervals()) {
    double di;
    if (iv.hi <= omega.a)
      di = omega.a - iv.hi;
    else if (iv.lo >= omega.b)
      di = iv.lo - omega.b;
    else
      di = 0.0;
    d = std::min(d, di);
  }
  return d;
}

ConditionC condition_C(const ExteriorSet& dirichlet, const Domain1D& omega, const FractionalOrder& order) {
  if (order.dimension != 1) throw Error(ErrorCode::InvalidArgument, "condition (C) is evaluated in 1D");
  const double s = order.s;
  const double e = 1.0 - 2.0 * s;
  ConditionC out;
  for (const auto& iv : dirichlet.intervals()) {
    const bool touches = iv.hi == omega.a || iv.lo == omega.b;
    if (touches && s >= 0.5) {
      out.finite = false;
      out.value = kInf;
      return out;
    }
    if (iv.overlap(omega.interval()) > 0.0) throw Error(ErrorCode::BadParameters, "Dirichlet set meets the domain");
    if (iv.bounded()) {
      out.value += kernel_cell_integral(iv, omega.interval(), order);
    } else if (iv.lo >= omega.b) {
      // (c, inf): int_a^b (c - y)^{-2s} / (2s) dy
      double c = iv.lo;
      out.value += quad::pow_diff(c - omega.a, c - omega.b, e) / (2.0 * s);
    } else if (iv.hi <= omega.a) {
      double c = iv.hi;
      out.value += quad::pow_diff(omega.b - c, omega.a - c, e) / (2.0 * s);
    } else {
      throw Error(ErrorCode::BadParameters, "unbounded Dirichlet interval covers the domain");
    }
  }
  return out;
}

}  // namespace fraclab
