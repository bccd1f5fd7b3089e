#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fraclab::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule with n points, 1 <= n <= 64.
const GaussRule& gauss_legendre(int n);

/// Fixed-order Gauss-Legendre on [lo, hi].
template <class F>
double gauss_fixed(F&& f, double lo, double hi, int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

struct QuadOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_intervals = 4000;
  int order = 10;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Legendre. Each subinterval is certified by comparing
/// the rule on the whole interval with the sum over its two halves; the worst
/// interval is split until the summed estimate is below max(rel_tol*|I|, abs_tol).
QuadResult adaptive(const std::function<double(double)>& f, double lo, double hi,
                    const QuadOptions& opts = {});

/// Same as adaptive() but throws Error(NonConvergedQuadrature) on failure.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadOptions& opts = {});

/// Integral of t^{-alpha} g(t) over (0, h] for alpha < 1, with g regular at 0.
/// The substitution t = h v^p, p = 1/(1-alpha), turns the weight into a constant.
double integrate_algebraic(const std::function<double(double)>& g, double h, double alpha,
                           const QuadOptions& opts = {});

/// Wynn epsilon extrapolation of a sequence of partial sums.
struct Extrapolated {
  double value = 0.0;
  double error = 0.0;
};
Extrapolated wynn_epsilon(std::span<const double> partial_sums);

/// (t1^q - t0^q) / q evaluated without cancellation; q == 0 gives log(t1/t0).
/// Requires t1, t0 > 0, except t0 == 0 is allowed when q > 0.
double pow_diff(double t1, double t0, double q);

}  // namespace fraclab::quad
