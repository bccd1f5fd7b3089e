#include "fraclab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <numbers>
#include <queue>

#include "fraclab/error.hpp"

namespace fraclab::quad {

namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

struct Piece {
  double lo, hi;
  double coarse;   // rule on [lo, hi]
  double left;     // rule on left half
  double right;    // rule on right half
  double error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static const std::array<GaussRule, 65> rules = [] {
    std::array<GaussRule, 65> r;
    for (int k = 1; k <= 64; ++k) r[k] = build_rule(k);
    return r;
  }();
  if (n < 1 || n > 64) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre order must lie in [1,64]");
  return rules[n];
}

QuadResult adaptive(const std::function<double(double)>& f, double lo, double hi, const QuadOptions& opts) {
  QuadResult res;
  if (lo == hi) {
    res.converged = true;
    return res;
  }
  const int n = opts.order;
  auto rule = [&](double a, double b) { return gauss_fixed(f, a, b, n); };
  auto make_piece = [&](double a, double b, double coarse) {
    double m = 0.5 * (a + b);
    Piece p{a, b, coarse, rule(a, m), rule(m, b), 0.0};
    p.error = std::abs(p.left + p.right - p.coarse);
    return p;
  };

  std::priority_queue<Piece> heap;
  heap.push(make_piece(lo, hi, rule(lo, hi)));
  double total = heap.top().left + heap.top().right;
  double total_err = heap.top().error;
  std::vector<Piece> frozen;
  int count = 1;

  auto target = [&] { return std::max(opts.rel_tol * std::abs(total), opts.abs_tol); };
  while (!heap.empty() && total_err > target()) {
    if (count >= opts.max_intervals) break;
    Piece worst = heap.top();
    heap.pop();
    double m = 0.5 * (worst.lo + worst.hi);
    if (!(m > worst.lo && m < worst.hi) || (worst.hi - worst.lo) < 1e-15 * std::max(std::abs(worst.lo), std::abs(worst.hi))) {
      frozen.push_back(worst);
      continue;
    }
    Piece a = make_piece(worst.lo, m, worst.left);
    Piece b = make_piece(m, worst.hi, worst.right);
    total += (a.left + a.right + b.left + b.right) - (worst.left + worst.right);
    total_err += a.error + b.error - worst.error;
    heap.push(a);
    heap.push(b);
    ++count;
  }
  // re-sum to remove drift from incremental updates
  double sum = 0.0, err = 0.0;
  std::vector<Piece> all = frozen;
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.lo < y.lo; });
  for (const auto& p : all) {
    sum += p.left + p.right;
    err += p.error;
  }
  res.value = sum;
  res.error = err;
  res.intervals = count;
  res.converged = err <= std::max(opts.rel_tol * std::abs(sum), opts.abs_tol) ||
                  err <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(sum);
  return res;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, const QuadOptions& opts) {
  QuadResult r = adaptive(f, lo, hi, opts);
  if (!r.converged) {
    throw Error(ErrorCode::NonConvergedQuadrature,
                "adaptive quadrature on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                    "] stopped at error " + std::to_string(r.error) + " for value " + std::to_string(r.value));
  }
  return r.value;
}

double integrate_algebraic(const std::function<double(double)>& g, double h, double alpha, const QuadOptions& opts) {
  if (!(alpha < 1.0)) throw Error(ErrorCode::DivergentIntegral, "endpoint exponent must be < 1");
  if (h <= 0.0) return 0.0;
  if (alpha <= 0.0) {
    return integrate([&](double t) { return std::pow(t, -alpha) * g(t); }, 0.0, h, opts);
  }
  const double p = 1.0 / (1.0 - alpha);
  const double scale = p * std::pow(h, 1.0 - alpha);
  return scale * integrate([&](double v) { return g(h * std::pow(v, p)); }, 0.0, 1.0, opts);
}

Extrapolated wynn_epsilon(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0) return {};
  if (n < 3) return {s.back(), n > 1 ? std::abs(s[n - 1] - s[n - 2]) : 0.0};
  // prev2 = column j-1, prev = column j
  std::vector<double> prev2(n + 1, 0.0), prev(s.begin(), s.end());
  double best = s.back();
  double best_err = std::abs(s[n - 1] - s[n - 2]);
  for (std::size_t j = 1; prev.size() > 1; ++j) {
    std::vector<double> next(prev.size() - 1);
    bool ok = true;
    for (std::size_t k = 0; k + 1 < prev.size(); ++k) {
      double diff = prev[k + 1] - prev[k];
      if (diff == 0.0) {
        ok = false;
        break;
      }
      next[k] = prev2[k + 1] + 1.0 / diff;
    }
    if (!ok) break;
    if (j % 2 == 0 && next.size() >= 2) {
      double est = next.back();
      double err = std::abs(next[next.size() - 1] - next[next.size() - 2]);
      if (err < best_err) {
        best = est;
        best_err = err;
      }
    }
    prev2 = std::move(prev);
    prev = std::move(next);
  }
  return {best, best_err};
}

double pow_diff(double t1, double t0, double q) {
  if (t0 == 0.0) {
    if (q <= 0.0) throw Error(ErrorCode::DivergentIntegral, "power difference with zero base and exponent <= 0");
    return std::pow(t1, q) / q;
  }
  const double log_ratio = std::log1p((t1 - t0) / t0);
  const double x = q * log_ratio;
  if (x == 0.0) return log_ratio * (q == 0.0 ? 1.0 : std::pow(t0, q));
  // t0^q (e^{q L} - 1) / q  ==  t0^q L expm1(x)/x
  return std::pow(t0, q) * log_ratio * (std::expm1(x) / x);
}

}  // namespace fraclab::quad
