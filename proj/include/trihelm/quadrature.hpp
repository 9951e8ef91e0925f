#pragma once

// Brillouin-zone quadrature reference for the lattice Green's function:
//   G(x) = (1/4pi^2) Int_{[-pi,pi]^2} e^{i x.xi} / sigma(xi; k^2 + i eps) dxi
// by tensor-product trapezoid sums on the periodic square.  The integrand is
// analytic for eps > 0, so the grid is doubled until the empirically fitted
// tail estimate drops below the requested tolerance.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "trihelm/errors.hpp"
#include "trihelm/lattice.hpp"

namespace trihelm {

struct OracleOptions {
  double tol = 1e-8;
  int m0 = 1024;        // first grid, doubled at every ladder rung
  int m_cap = 131072;   // refinement beyond this raises ToleranceNotReached
};

namespace detail {

// One full tensor trapezoid pass at grid M for every requested point.
// sigma has constant imaginary part eps, so 1/sigma splits into real arrays
// and each distinct |x1| costs four real reductions per xi2 row.
inline std::vector<Complex> trapezoid_pass(const std::vector<Point>& xs, double k,
                                           double eps, int m) {
  using Eigen::ArrayXd;
  const double pi = 3.14159265358979323846;
  ArrayXd t(m);
  for (int i = 0; i < m; ++i) t[i] = -pi + 2 * pi * i / m;
  ArrayXd u = 2 * t.cos();
  ArrayXd v = 2 * t.sin();

  std::vector<std::int64_t> abs_x1;
  for (Point x : xs) abs_x1.push_back(std::abs(x.x1));
  std::sort(abs_x1.begin(), abs_x1.end());
  abs_x1.erase(std::unique(abs_x1.begin(), abs_x1.end()), abs_x1.end());

  std::map<std::int64_t, std::pair<ArrayXd, ArrayXd>> wave;  // |a| -> (cos at, sin at)
  for (std::int64_t a : abs_x1) {
    ArrayXd at = static_cast<double>(a) * t;
    wave.emplace(a, std::make_pair(at.cos(), at.sin()));
  }

  std::map<std::int64_t, Complex> row;  // per-row partial sums keyed by x1
  std::vector<Complex> total(xs.size(), Complex(0, 0));
  const double base0 = k * k - 6;
  const double eps2 = eps * eps;
  ArrayXd sr(m), w(m), ir(m), ii(m);
  for (int i2 = 0; i2 < m; ++i2) {
    double c2 = std::cos(t[i2]), s2 = std::sin(t[i2]);
    sr = (base0 + 2 * c2) + (1 + c2) * u + s2 * v;
    w = (sr * sr + eps2).inverse();
    ir = sr * w;
    ii = -eps * w;
    row.clear();
    for (std::int64_t a : abs_x1) {
      // one set of reductions serves both signs of x1
      const auto& [cr, ci] = wave.at(a);
      double rr = (cr * ir).sum(), ss = (ci * ii).sum();
      double ri = (cr * ii).sum(), si = (ci * ir).sum();
      row[a] = Complex(rr - ss, ri + si);
      if (a != 0) row[-a] = Complex(rr + ss, ri - si);
    }
    for (std::size_t j = 0; j < xs.size(); ++j)
      total[j] += std::polar(1.0, static_cast<double>(xs[j].x2) * t[i2]) * row[xs[j].x1];
  }
  for (Complex& c : total) c /= static_cast<double>(m) * static_cast<double>(m);
  return total;
}

}  // namespace detail

struct OracleResult {
  std::vector<Complex> values;
  double err_est = 0;
  int grid = 0;
};

// Grid-doubling ladder.  With successive max changes d_prev, d the error of
// the finer grid is estimated as d*(d/d_prev)^2 when convergence looks
// exponential (ratio clearly < 1) and as the geometric tail d*r/(1-r)
// otherwise; refinement past the cap raises ToleranceNotReached.
inline OracleResult green_quadrature_oracle_batch(const std::vector<Point>& xs, double k,
                                                  double eps, OracleOptions opt = {}) {
  if (!(eps > 0)) throw ValidationError("quadrature oracle requires positive damping");
  if (!(opt.tol > 0)) throw ValidationError("tolerance must be positive");
  if (xs.empty()) return {{}, 0.0, opt.m0};

  int m = opt.m0;
  std::vector<Complex> prev = detail::trapezoid_pass(xs, k, eps, m);
  double d_prev = -1;
  while (2 * m <= opt.m_cap) {
    m *= 2;
    std::vector<Complex> cur = detail::trapezoid_pass(xs, k, eps, m);
    double d = 0;
    for (std::size_t j = 0; j < xs.size(); ++j) d = std::max(d, std::abs(cur[j] - prev[j]));
    double err_est;
    if (d == 0) {
      err_est = 0;
    } else if (d_prev < 0) {
      err_est = d;  // single difference: no rate information yet
    } else {
      double r = d / d_prev;
      if (r >= 1)
        err_est = std::numeric_limits<double>::infinity();
      else if (r > 0.3)
        err_est = d * r / (1 - r);
      else
        err_est = d * r * r;
    }
    if (err_est <= opt.tol) return {std::move(cur), err_est, m};
    prev = std::move(cur);
    d_prev = d;
  }
  throw ToleranceNotReached("quadrature ladder hit the grid cap before the tolerance");
}

inline Complex green_quadrature_oracle(Point x, double k, double eps, OracleOptions opt = {}) {
  return green_quadrature_oracle_batch({x}, k, eps, opt).values[0];
}

// Richardson extrapolation toward vanishing damping (eps, eps/2, eps/4;
// eliminates the first two powers of eps).
inline Complex oracle_extrapolated(Point x, double k, double eps, OracleOptions opt = {}) {
  Complex f[3];
  for (int i = 0; i < 3; ++i)
    f[i] = green_quadrature_oracle(x, k, eps / static_cast<double>(1 << i), opt);
  Complex g0 = 2.0 * f[1] - f[0];
  Complex g1 = 2.0 * f[2] - f[1];
  return (4.0 * g1 - g0) / 3.0;
}

}  // namespace trihelm
