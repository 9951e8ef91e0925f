#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"
#include "lattice.hpp"

namespace trihelm {

using Complex = std::complex<double>;

inline constexpr double kMaxWaveNumber = 2.8284271247461902976;  // 2*sqrt(2)

inline void validate_wave_number(double k) {
  if (!(k > 0.0) || !(k < kMaxWaveNumber))
    throw ValidationError("wave number k must lie in (0, 2*sqrt(2)), got " + std::to_string(k));
}

// Saddle point of the phase x.xi on the dispersion curve sigma(xi; k^2) = 0 for the
// direction (cos a, sin a) in Z^2 coordinates:
//   2 zeta (sin xi1 + sin(xi1 - xi2)) = cos a
//   2 zeta (sin xi2 - sin(xi1 - xi2)) = sin a
//   k^2 - 6 + 2 cos xi1 + 2 cos xi2 + 2 cos(xi1 - xi2) = 0
struct SaddlePoint {
  double alpha = 0, k = 0;
  double xi1 = 0, xi2 = 0, zeta = 0;
  double mu() const { return xi1 * std::cos(alpha) + xi2 * std::sin(alpha); }
};

namespace detail {

template <class S>
struct DispState {
  S xi1, xi2, zeta;
};

template <class S>
inline double resid_norm(const S* f) {
  return std::max({std::abs(f[0]), std::abs(f[1]), std::abs(f[2])});
}

template <class S>
inline void disp_residual(double alpha, S K, const DispState<S>& s, S* f) {
  f[0] = 2.0 * s.zeta * (std::sin(s.xi1) + std::sin(s.xi1 - s.xi2)) - std::cos(alpha);
  f[1] = 2.0 * s.zeta * (std::sin(s.xi2) - std::sin(s.xi1 - s.xi2)) - std::sin(alpha);
  f[2] = K - 6.0 + 2.0 * std::cos(s.xi1) + 2.0 * std::cos(s.xi2) + 2.0 * std::cos(s.xi1 - s.xi2);
}

template <class S>
inline bool solve3(S a[3][3], S b[3]) {
  int piv[3] = {0, 1, 2};
  for (int c = 0; c < 3; ++c) {
    int best = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(a[piv[r]][c]) > std::abs(a[piv[best]][c])) best = r;
    std::swap(piv[c], piv[best]);
    if (std::abs(a[piv[c]][c]) < 1e-300) return false;
    for (int r = c + 1; r < 3; ++r) {
      S m = a[piv[r]][c] / a[piv[c]][c];
      for (int cc = c; cc < 3; ++cc) a[piv[r]][cc] -= m * a[piv[c]][cc];
      b[piv[r]] -= m * b[piv[c]];
    }
  }
  S x[3];
  for (int c = 2; c >= 0; --c) {
    S s = b[piv[c]];
    for (int cc = c + 1; cc < 3; ++cc) s -= a[piv[c]][cc] * x[cc];
    x[c] = s / a[piv[c]][c];
  }
  b[0] = x[0]; b[1] = x[1]; b[2] = x[2];
  return true;
}

// damped Newton on the 3-equation system; returns false if it fails to reach 1e-13
template <class S>
inline bool newton(double alpha, S K, DispState<S>& s) {
  S f[3];
  disp_residual(alpha, K, s, f);
  double r = resid_norm(f);
  for (int it = 0; it < 60 && r > 1e-13; ++it) {
    S c1 = std::cos(s.xi1), c2 = std::cos(s.xi2), c12 = std::cos(s.xi1 - s.xi2);
    S s1 = std::sin(s.xi1), s2 = std::sin(s.xi2), s12 = std::sin(s.xi1 - s.xi2);
    S J[3][3] = {{2.0 * s.zeta * (c1 + c12), -2.0 * s.zeta * c12, 2.0 * (s1 + s12)},
                 {-2.0 * s.zeta * c12, 2.0 * s.zeta * (c2 + c12), 2.0 * (s2 - s12)},
                 {-2.0 * (s1 + s12), -2.0 * (s2 - s12), S(0.0)}};
    S d[3] = {f[0], f[1], f[2]};
    if (!solve3(J, d)) return false;
    double step = 1.0;
    bool moved = false;
    for (int h = 0; h < 25 && !moved; ++h) {
      DispState<S> t{s.xi1 - step * d[0], s.xi2 - step * d[1], s.zeta - step * d[2]};
      S ft[3];
      disp_residual(alpha, K, t, ft);
      if (resid_norm(ft) < r) {
        s = t;
        f[0] = ft[0]; f[1] = ft[1]; f[2] = ft[2];
        r = resid_norm(ft);
        moved = true;
      }
      step *= 0.5;
    }
    if (!moved) break;  // stagnated at the attainable floor
  }
  return r <= 1e-12;
}

inline DispState<double> pi4_anchor(double k) {
  double t = std::acos((4.0 - k * k) / 4.0);
  return {t, t, std::sqrt(2.0) / (4.0 * std::sin(t))};
}

}  // namespace detail

// Continuation in alpha from the analytic pi/4 solution, step <= pi/64.
inline SaddlePoint solve_dispersion(double alpha, double k) {
  validate_wave_number(k);
  double tau = 2.0 * std::numbers::pi;
  double a = std::fmod(alpha, tau);
  if (a < 0) a += tau;
  double from = std::numbers::pi / 4;
  detail::DispState<double> s = detail::pi4_anchor(k);
  double delta = a - from;
  if (delta > std::numbers::pi) delta -= tau;   // shortest arc
  if (delta < -std::numbers::pi) delta += tau;
  int steps = std::max(1, static_cast<int>(std::ceil(std::abs(delta) / (std::numbers::pi / 64))));
  for (int i = 1; i <= steps; ++i) {
    double ai = from + delta * static_cast<double>(i) / steps;
    if (!detail::newton(ai, k * k, s)) throw NoConvergence(alpha, k);
  }
  if (!(s.zeta > 0)) throw NoConvergence(alpha, k);
  return {a, k, s.xi1, s.xi2, s.zeta};
}

// warm-started variant used by shell sweeps (target close to the start's alpha)
inline SaddlePoint solve_dispersion_from(const SaddlePoint& start, double alpha, double k) {
  detail::DispState<double> s{start.xi1, start.xi2, start.zeta};
  double delta = alpha - start.alpha;
  int steps = std::max(1, static_cast<int>(std::ceil(std::abs(delta) / (std::numbers::pi / 64))));
  for (int i = 1; i <= steps; ++i) {
    if (!detail::newton(start.alpha + delta * static_cast<double>(i) / steps, k * k, s))
      throw NoConvergence(alpha, k);
  }
  if (!(s.zeta > 0)) throw NoConvergence(alpha, k);
  return {alpha, k, s.xi1, s.xi2, s.zeta};
}

// analytic continuation of the saddle to complex K = k^2 + i eps (used by the
// truncation seed); starts from the real-K solution
struct ComplexSaddle {
  Complex xi1, xi2, zeta;
};

inline ComplexSaddle continue_to_complex(const SaddlePoint& real_sol, Complex K) {
  detail::DispState<Complex> s{real_sol.xi1, real_sol.xi2, real_sol.zeta};
  if (!detail::newton(real_sol.alpha, K, s)) throw NoConvergence(real_sol.alpha, real_sol.k);
  return {s.xi1, s.xi2, s.zeta};
}

// curvature of the dispersion curve {sigma = 0} at xi (complex-analytic in K)
inline Complex curve_curvature(Complex xi1, Complex xi2) {
  Complex sx = -2.0 * std::sin(xi1) - 2.0 * std::sin(xi1 - xi2);
  Complex sy = -2.0 * std::sin(xi2) + 2.0 * std::sin(xi1 - xi2);
  Complex sxx = -2.0 * std::cos(xi1) - 2.0 * std::cos(xi1 - xi2);
  Complex syy = -2.0 * std::cos(xi2) - 2.0 * std::cos(xi1 - xi2);
  Complex sxy = 2.0 * std::cos(xi1 - xi2);
  Complex g2 = sx * sx + sy * sy;
  return (syy * sx * sx - 2.0 * sxy * sx * sy + sxx * sy * sy) / (g2 * std::sqrt(g2));
}

inline double lattice_direction_angle(Point y) {
  double a = std::atan2(static_cast<double>(y.x2), static_cast<double>(y.x1));
  if (a < 0) a += 2.0 * std::numbers::pi;
  return a;
}

// zeta(y,k) of the uniqueness lemma: 1 - exp(-i xi* . e_j) at the point's own direction;
// sides 4..6 follow from e_{j+3} = -e_j.
inline Complex zeta_boundary(Point y, int j, double k) {
  SaddlePoint s = solve_dispersion(lattice_direction_angle(y), k);
  Point e = direction(j);
  double phase = s.xi1 * static_cast<double>(e.x1) + s.xi2 * static_cast<double>(e.x2);
  Complex z = 1.0 - std::exp(Complex(0.0, -phase));
  if (!(z.imag() > 0)) throw Error("zeta(y,k) lost its positive imaginary part");
  return z;
}

}  // namespace trihelm
