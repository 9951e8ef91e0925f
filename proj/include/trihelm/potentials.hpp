#pragma once

// Difference layer potentials over an enumerated boundary, the outward normal
// difference, and the Green representation formula / second identity used as
// consistency oracles.  All boundary sums run in enumeration order with
// compensated accumulation so results are bit-reproducible.

#include <cstdlib>
#include <vector>

#include "trihelm/errors.hpp"
#include "trihelm/green.hpp"
#include "trihelm/lattice.hpp"

namespace trihelm {

using BoundaryDensity = std::vector<Complex>;

namespace detail {

struct KahanSum {
  Complex sum{0, 0}, carry{0, 0};
  void add(Complex v) {
    Complex y = v - carry;
    Complex t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  Complex value() const { return sum; }
};

inline void require_density(const BoundaryEnumeration& b, const BoundaryDensity& phi) {
  if (phi.size() != b.size())
    throw ValidationError("density length does not match the boundary enumeration");
}

}  // namespace detail

// Tu(y) = u(y) - u(y - e_j), the outward difference across side j.
template <class Fn>
Complex normal_derivative(Fn&& u, const Region& r, Point y, int j) {
  Point inward = y - direction(j);
  if (!r.is_interior(inward)) throw SideMismatch("shift by -e_j does not reach the interior");
  return u(y) - u(inward);
}

// Reduced single layer: one summand per distinct boundary point (the form the
// exterior problem without a hole is solved in).
inline Complex single_layer(const BoundaryEnumeration& b, const GreenEngine& g,
                            const BoundaryDensity& phi, Point x) {
  detail::require_density(b, phi);
  detail::KahanSum acc;
  for (std::size_t i = 0; i < b.size(); ++i) acc.add(g.green(x - b.points[i]) * phi[i]);
  return acc.value();
}

// Side-counted single layer: every point enters once per side it belongs to,
// V phi(x) = sum_j n_j G(x - y_j) phi_j.  This is the V of the combined-layer
// ansatz for regions with a hole.
inline Complex single_layer_weighted(const BoundaryEnumeration& b, const GreenEngine& g,
                                     const BoundaryDensity& phi, Point x) {
  detail::require_density(b, phi);
  detail::KahanSum acc;
  for (std::size_t i = 0; i < b.size(); ++i)
    acc.add(static_cast<double>(b.multiplicity(i)) * g.green(x - b.points[i]) * phi[i]);
  return acc.value();
}

// Double layer over the enumerated boundary,
//   W phi(x) = sum_y ( sum_{sides l of y} (G(x-y) - G(x-y+e_l)) + delta_{x,y} ) phi(y).
// T runs over every side of y while the Kronecker correction enters once per
// distinct point: an interior x neighbors y through exactly one inward side,
// whose -G(x-y+e_l) stencil hit the +delta cancels, so (Delta_d+k^2)W phi
// vanishes on the whole interior even where the stencil touches the boundary.
inline Complex double_layer(const BoundaryEnumeration& b, const GreenEngine& g,
                            const BoundaryDensity& phi, Point x) {
  detail::require_density(b, phi);
  detail::KahanSum acc;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Complex here = g.green(x - b.points[i]);
    for (Point in : b.inward[i]) acc.add((here - g.green(x - in)) * phi[i]);
    if (x == b.points[i]) acc.add(phi[i]);
  }
  return acc.value();
}

// Hole-side double layer W' (no Kronecker correction): the enumeration must
// carry sides w.r.t. the complement's interior, which exists only when the
// problem actually has a hole.
inline Complex double_layer_complement(const Region& complement, const BoundaryEnumeration& b,
                                       const GreenEngine& g, const BoundaryDensity& phi,
                                       Point x) {
  if (complement.kind != Region::Kind::Finite || complement.interior.empty())
    throw CaseMismatch("hole-side double layer needs a complement with interior points");
  detail::require_density(b, phi);
  detail::KahanSum acc;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Complex here = g.green(x - b.points[i]);
    for (Point in : b.inward[i]) acc.add((here - g.green(x - in)) * phi[i]);
  }
  return acc.value();
}

// Boundary trace of a lattice function: values plus per-side outward
// differences, aligned with the enumeration.
struct BoundaryTrace {
  std::vector<Complex> value;
  std::vector<std::vector<Complex>> normal;
};

template <class Fn>
BoundaryTrace boundary_trace(Fn&& u, const Region& r, const BoundaryEnumeration& b) {
  BoundaryTrace t;
  t.value.reserve(b.size());
  t.normal.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    t.value.push_back(u(b.points[i]));
    std::vector<Complex> per_side;
    for (int j : b.sides[i]) per_side.push_back(normal_derivative(u, r, b.points[i], j));
    t.normal.push_back(std::move(per_side));
  }
  return t;
}

// u(x) = sum_{y in boundary, per side} (u(y) T G(x-y) - G(x-y) T u(y)) for x
// interior to a finite region, provided u solves the (damped) equation there.
inline Complex green_representation(const BoundaryEnumeration& b, const BoundaryTrace& trace,
                                    const GreenEngine& g, Point x) {
  detail::KahanSum acc;
  for (std::size_t i = 0; i < b.size(); ++i) {
    Complex here = g.green(x - b.points[i]);
    for (std::size_t l = 0; l < b.sides[i].size(); ++l) {
      Complex tg = here - g.green(x - b.inward[i][l]);
      acc.add(trace.value[i] * tg - here * trace.normal[i][l]);
    }
  }
  return acc.value();
}

// Defect of the summation-by-parts identity
//   sum_{x interior} (u Ld v - v Ld u) = sum_{y boundary, per side} (u Tv - v Tu)
// with Ld the plain 7-point Laplacian; exact up to rounding for any fields.
template <class FnU, class FnV>
double green_second_identity_check(FnU&& u, FnV&& v, const Region& r) {
  auto lap = [&](auto&& f, Point x) {
    Complex s = -6.0 * f(x);
    for (Point d : kDirections) s += f(x + d);
    return s;
  };
  detail::KahanSum lhs;
  for (Point x : r.interior) lhs.add(u(x) * lap(v, x) - v(x) * lap(u, x));
  BoundaryEnumeration b = enumerate_boundary(r);
  detail::KahanSum rhs;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (int j : b.sides[i])
      rhs.add(u(b.points[i]) * normal_derivative(v, r, b.points[i], j) -
              v(b.points[i]) * normal_derivative(u, r, b.points[i], j));
  return std::abs(lhs.value() - rhs.value());
}

}  // namespace trihelm
