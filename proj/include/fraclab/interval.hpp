#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclab/error.hpp"

namespace fraclab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi); either endpoint may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool empty() const { return !(hi > lo); }
  bool contains(double x) const { return x > lo && x < hi; }
  bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }

  Interval clip(double a, double b) const { return {std::max(lo, a), std::min(hi, b)}; }
  double overlap(const Interval& o) const {
    double l = std::min(hi, o.hi) - std::max(lo, o.lo);
    return l > 0.0 ? l : 0.0;
  }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Bounded open interval Omega = (a, b).
struct Domain1D {
  double a = -1.0;
  double b = 1.0;

  Domain1D() = default;
  Domain1D(double a_, double b_) : a(a_), b(b_) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
      throw Error(ErrorCode::InvalidArgument, "domain requires finite a < b");
  }

  double length() const { return b - a; }
  double center() const { return 0.5 * (a + b); }
  Interval interval() const { return {a, b}; }

  /// Distance from x to the closed interval [a, b] (0 inside).
  double distance(double x) const {
    if (x < a) return a - x;
    if (x > b) return x - b;
    return 0.0;
  }
};

}  // namespace fraclab
