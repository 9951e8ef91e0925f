#pragma once

// Far-field verification: phase-ratio checks of the radiation condition along
// lattice rays, amplitude decay fits, and the far-field estimator.  Rays are
// integer lattice directions (the field lives on the lattice); the reported
// angle is the Z^2-coordinate angle of the direction, which is what the
// saddle-point system consumes.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "trihelm/dispersion.hpp"
#include "trihelm/errors.hpp"
#include "trihelm/lattice.hpp"

namespace trihelm {

struct RadiationOptions {
  Point anchor{0, 0};           // samples are anchor + m * dir
  EmbeddedPoint center{0, 0};   // embedded origin the radii are measured from
  double r_min = 20, r_max = 80;
  int phase_radii = 7;          // radii probed for the phase-ratio trend
  int min_samples = 4;
};

struct RayRadiationCheck {
  Point dir{1, 0};
  double alpha = 0;               // Z^2 angle of dir in [0, 2 pi)
  std::vector<double> radii;      // realized embedded radii of the samples
  std::vector<double> amplitude;  // |u| sqrt(r) at those radii
  double decay_exponent = 0;      // least-squares slope of log|u| vs log r
  // per neighbor step e_1..e_6: |u(x+e_j)/u(x) - exp(i xi* . e_j)| at the
  // probe radii, and whether the errors decrease strictly along the ray
  std::array<std::vector<double>, 6> phase_errors;
  std::array<bool, 6> phase_trend{};
};

struct RadiationReport {
  double k = 0;
  double r_min = 0, r_max = 0;
  std::vector<RayRadiationCheck> rays;

  double worst_exponent_deviation() const {
    double w = 0;
    for (const auto& r : rays) {
      double d = std::abs(r.decay_exponent + 0.5);
      w = std::isfinite(d) ? std::max(w, d) : std::numeric_limits<double>::infinity();
    }
    return w;
  }
  // trends for the first upto_j neighbor steps hold on every ray
  bool phase_trends_ok(int upto_j = 2) const {
    for (const auto& r : rays)
      for (int j = 0; j < upto_j; ++j)
        if (!r.phase_trend[static_cast<std::size_t>(j)]) return false;
    return !rays.empty();
  }
};

namespace detail {

inline double embedded_radius(Point p, EmbeddedPoint c) {
  EmbeddedPoint e = embed(p);
  return std::hypot(e.ex - c.ex, e.ey - c.ey);
}

inline double fitted_slope(const std::vector<double>& logx, const std::vector<double>& logy) {
  if (logx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double n = static_cast<double>(logx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < logx.size(); ++i) {
    sx += logx[i];
    sy += logy[i];
    sxx += logx[i] * logx[i];
    sxy += logx[i] * logy[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// Sample u along anchor + m*dir for the radii window, fit the amplitude decay,
// and measure the phase-ratio errors of the radiation condition at a spread of
// probe radii.  Throws InsufficientSamples when the window holds too few points.
template <class Provider>
RayRadiationCheck check_ray(Provider&& u, double k, Point dir, const RadiationOptions& opt = {}) {
  validate_wave_number(k);
  if (dir == Point{0, 0}) throw ValidationError("ray direction must be nonzero");
  if (!(opt.r_min > 0) || !(opt.r_max > opt.r_min))
    throw ValidationError("radii window must satisfy 0 < r_min < r_max");

  RayRadiationCheck ray;
  ray.dir = dir;
  ray.alpha = lattice_direction_angle(dir);
  const double step = detail::embedded_radius(dir, {0, 0});
  const double reach = detail::embedded_radius(opt.anchor, opt.center);
  const auto m_cap = static_cast<std::int64_t>(std::ceil((opt.r_max + reach + 2.0) / step)) + 1;

  std::vector<Point> samples;
  for (std::int64_t m = 1; m <= m_cap; ++m) {
    Point x = opt.anchor + Point{m * dir.x1, m * dir.x2};
    double r = detail::embedded_radius(x, opt.center);
    if (r < opt.r_min || r > opt.r_max) continue;
    samples.push_back(x);
    ray.radii.push_back(r);
  }
  if (samples.size() < static_cast<std::size_t>(opt.min_samples))
    throw InsufficientSamples("radii window holds fewer samples than required along the ray");

  std::vector<double> logr, logu;
  std::vector<Complex> values(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    values[i] = u(samples[i]);
    double a = std::abs(values[i]);
    ray.amplitude.push_back(a * std::sqrt(ray.radii[i]));
    if (a > 0) {
      logr.push_back(std::log(ray.radii[i]));
      logu.push_back(std::log(a));
    }
  }
  ray.decay_exponent = detail::fitted_slope(logr, logu);

  SaddlePoint s = solve_dispersion(ray.alpha, k);
  std::vector<std::size_t> probes;
  auto n = samples.size();
  auto want = static_cast<std::size_t>(opt.phase_radii);
  for (std::size_t i = 0; i < std::min(want, n); ++i) {
    auto idx = want > 1 ? (i * (n - 1)) / (std::min(want, n) - 1) : n - 1;
    if (probes.empty() || probes.back() != idx) probes.push_back(idx);
  }
  for (int j = 1; j <= 6; ++j) {
    Point e = direction(j);
    Complex expected = std::exp(Complex(0, s.xi1 * static_cast<double>(e.x1) +
                                               s.xi2 * static_cast<double>(e.x2)));
    auto& errs = ray.phase_errors[static_cast<std::size_t>(j - 1)];
    for (std::size_t idx : probes) {
      Complex base = values[idx];
      if (base == Complex(0, 0)) {
        errs.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      errs.push_back(std::abs(u(samples[idx] + e) / base - expected));
    }
    bool mono = errs.size() >= 2;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) mono = mono && errs[i + 1] < errs[i];
    ray.phase_trend[static_cast<std::size_t>(j - 1)] = mono;
  }
  return ray;
}

template <class Provider>
RadiationReport check_radiation(Provider&& u, double k, const std::vector<Point>& rays,
                                const RadiationOptions& opt = {}) {
  if (rays.empty()) throw ValidationError("at least one ray direction is required");
  RadiationReport rep;
  rep.k = k;
  rep.r_min = opt.r_min;
  rep.r_max = opt.r_max;
  for (Point d : rays) rep.rays.push_back(check_ray(u, k, d, opt));
  return rep;
}

struct FarFieldEstimate {
  Complex value{0, 0};
  double indicator = 0;  // spread of the last two extrapolants
};

// Far-field amplitude along the ray anchor + m*dir: extrapolate
// f(r) = -u(x) sqrt(|x|) exp(-i xi* . x) under an O(1/r) remainder from the
// given multiples.  Throws NonConvergent when successive estimates diverge.
template <class Provider>
FarFieldEstimate far_field_estimate(Provider&& u, double k, Point dir,
                                    const std::vector<std::int64_t>& multiples,
                                    Point anchor = {0, 0}) {
  validate_wave_number(k);
  if (dir == Point{0, 0}) throw ValidationError("ray direction must be nonzero");
  if (multiples.size() < 3)
    throw InsufficientSamples("far-field extrapolation needs at least three radii");
  for (std::size_t i = 0; i + 1 < multiples.size(); ++i)
    if (!(multiples[i] > 0) || !(multiples[i] < multiples[i + 1]))
      throw ValidationError("multiples must be positive and strictly increasing");

  SaddlePoint s = solve_dispersion(lattice_direction_angle(dir), k);
  std::vector<double> r(multiples.size());
  std::vector<Complex> f(multiples.size());
  for (std::size_t i = 0; i < multiples.size(); ++i) {
    Point x = anchor + Point{multiples[i] * dir.x1, multiples[i] * dir.x2};
    r[i] = std::hypot(static_cast<double>(x.x1), static_cast<double>(x.x2));
    double phase = s.xi1 * static_cast<double>(x.x1) + s.xi2 * static_cast<double>(x.x2);
    f[i] = -u(x) * std::sqrt(r[i]) * std::exp(Complex(0, -phase));
  }
  auto nn = f.size();
  double d_prev = std::abs(f[nn - 2] - f[nn - 3]);
  double d_last = std::abs(f[nn - 1] - f[nn - 2]);
  if (d_last > d_prev && d_last > 1e-13 * (1.0 + std::abs(f[nn - 1])))
    throw NonConvergent("successive far-field estimates diverge along the ray");
  auto pair_extrap = [&](std::size_t i, std::size_t j) {
    return (r[j] * f[j] - r[i] * f[i]) / (r[j] - r[i]);
  };
  FarFieldEstimate out;
  out.value = pair_extrap(nn - 2, nn - 1);
  out.indicator = std::abs(out.value - pair_extrap(nn - 3, nn - 2));
  return out;
}

}  // namespace trihelm
