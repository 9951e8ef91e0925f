#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace trihelm {

struct Point {
  std::int64_t x1 = 0, x2 = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;  // lexicographic (x1, x2)
  Point operator+(Point o) const { return {x1 + o.x1, x2 + o.x2}; }
  Point operator-(Point o) const { return {x1 - o.x1, x2 - o.x2}; }
  Point operator-() const { return {-x1, -x2}; }
};

// e1..e6 with e_{j+3} = -e_j; index j runs 1..6 in the API.
inline constexpr std::array<Point, 6> kDirections{{{1, 0}, {0, 1}, {1, -1}, {-1, 0}, {0, -1}, {-1, 1}}};

inline Point direction(int j) { return kDirections[static_cast<std::size_t>(j - 1)]; }

struct EmbeddedPoint {
  double ex, ey;
};

inline EmbeddedPoint embed(Point p) {
  return {static_cast<double>(p.x1) + 0.5 * static_cast<double>(p.x2),
          0.8660254037844386467637231707529362 * static_cast<double>(p.x2)};
}

inline std::array<Point, 6> neighborhood(Point p) {
  std::array<Point, 6> out;
  for (int j = 1; j <= 6; ++j) out[static_cast<std::size_t>(j - 1)] = p + direction(j);
  return out;
}

// Shell index of the symmetry orbit: invariant under (x1,x2)->(x2,x1), ->(-x1,-x2),
// ->(x1+x2,-x2), and equal to |i|+|j| of the canonical i>=j>=0 representative.
inline std::int64_t hexdist(Point p) {
  return (std::llabs(p.x1) + std::llabs(p.x2) + std::llabs(p.x1 + p.x2)) / 2;
}

using PointSet = std::set<Point>;

struct Region {
  enum class Kind {
    Finite,    // explicit interior + boundary (hexagon windows, Case II complements)
    Cofinite,  // explicit boundary, interior = Z^2 minus boundary (Case I)
  };
  Kind kind = Kind::Finite;
  PointSet interior;  // empty for Cofinite
  PointSet boundary;

  bool is_interior(Point p) const {
    if (kind == Kind::Cofinite) return !boundary.contains(p);
    return interior.contains(p);
  }
};

inline Region make_case1_region(PointSet boundary) {
  return Region{Region::Kind::Cofinite, {}, std::move(boundary)};
}

inline Region make_finite_region(PointSet interior, PointSet boundary) {
  return Region{Region::Kind::Finite, std::move(interior), std::move(boundary)};
}

// H_N: interior H_{N-1}, boundary H_N \ H_{N-1}; H_0 = {(0,0)} (not a valid region by itself).
inline Region hexagon_window(std::int64_t N) {
  Region r;
  for (std::int64_t x1 = -N; x1 <= N; ++x1)
    for (std::int64_t x2 = -N; x2 <= N; ++x2) {
      Point p{x1, x2};
      std::int64_t h = hexdist(p);
      if (h < N) r.interior.insert(p);
      else if (h == N) r.boundary.insert(p);
    }
  return r;
}

struct RegionReport {
  bool ok = true;
  std::string what;
  Point where{};
};

inline RegionReport validate_region_report(const Region& r) {
  auto fail = [](std::string w, Point p) { return RegionReport{false, std::move(w), p}; };
  if (r.boundary.empty()) return fail("disjointness: boundary empty", {});
  if (r.kind == Region::Kind::Finite) {
    if (r.interior.empty()) return fail("disjointness: interior empty", {});
    for (Point p : r.interior)
      if (r.boundary.contains(p)) return fail("disjointness", p);
    // axiom (b): the full 7-point neighborhood of an interior point stays in the region
    for (Point p : r.interior)
      for (Point q : neighborhood(p))
        if (!r.interior.contains(q) && !r.boundary.contains(q)) return fail("interior neighborhood", p);
  }
  // axiom (c): every boundary point touches the interior
  for (Point y : r.boundary) {
    bool touches = false;
    for (Point q : neighborhood(y))
      if (r.is_interior(q)) { touches = true; break; }
    if (!touches) return fail("boundary contact", y);
  }
  if (r.kind == Region::Kind::Finite) {
    // 6-adjacency connectivity of interior + boundary
    PointSet all = r.interior;
    all.insert(r.boundary.begin(), r.boundary.end());
    PointSet seen;
    std::queue<Point> q;
    q.push(*all.begin());
    seen.insert(*all.begin());
    while (!q.empty()) {
      Point p = q.front();
      q.pop();
      for (Point nb : neighborhood(p))
        if (all.contains(nb) && seen.insert(nb).second) q.push(nb);
    }
    if (seen.size() != all.size()) {
      for (Point p : all)
        if (!seen.contains(p)) return fail("disconnected", p);
    }
  }
  // Cofinite regions cover all of Z^2 as a vertex set: (a),(b), connectivity are automatic.
  return {};
}

inline void validate_region(const Region& r) {
  RegionReport rep = validate_region_report(r);
  if (rep.ok) return;
  std::string at = " at (" + std::to_string(rep.where.x1) + "," + std::to_string(rep.where.x2) + ")";
  if (rep.what.starts_with("disjointness")) throw DisjointnessViolation(rep.what + at);
  if (rep.what.starts_with("interior neighborhood")) throw InteriorNeighborhoodViolation(rep.what + at);
  if (rep.what.starts_with("boundary contact")) throw BoundaryContactViolation(rep.what + at);
  throw Disconnected(rep.what + at);
}

// Cone C_i(w), i = 0..5: the closed 120-degree sector of the embedded plane centered on
// direction i*60deg.  With lattice offset (a,b) = v - w the defining inequality
// |-sin(th) de1 + cos(th) de2| <= sqrt3 (cos(th) de1 + sin(th) de2) reduces to the pure
// integer test |cp*b - sq*(2a+b)| <= cp*(2a+b) + 3*sq*b, where 2cos(th) = cp and
// 2sin(th) = sq*sqrt3 — the sqrt3 factors cancel exactly, so no floating point is involved.
inline bool cone_contains(int i, Point w, Point v) {
  static constexpr int cp[6] = {2, 1, -1, -2, -1, 1};
  static constexpr int sq[6] = {0, 1, 1, 0, -1, -1};
  std::int64_t a = v.x1 - w.x1, b = v.x2 - w.x2;
  std::int64_t L = cp[i] * b - sq[i] * (2 * a + b);
  std::int64_t R = cp[i] * (2 * a + b) + 3 * sq[i] * b;
  return std::llabs(L) <= R;
}

// Exterior-region cone condition; `r` is the finite complement representation
// (Case I: boundary only, C = empty; Case II: C = interior of the complement).
// Only points inside the complement's bounding box dilated by 2 need testing: from any w
// outside that box, the finite set C is seen within an open half-plane (angle < 180deg),
// and since consecutive cone axes are 60deg apart some 120deg cone lies in the
// complementary sector and misses C entirely.
inline std::optional<Point> cone_condition_violation(const Region& r) {
  if (r.kind == Region::Kind::Cofinite || r.interior.empty()) return std::nullopt;
  const PointSet& C = r.interior;
  std::int64_t lo1 = C.begin()->x1, hi1 = lo1, lo2 = C.begin()->x2, hi2 = lo2;
  for (Point p : C) {
    lo1 = std::min(lo1, p.x1); hi1 = std::max(hi1, p.x1);
    lo2 = std::min(lo2, p.x2); hi2 = std::max(hi2, p.x2);
  }
  for (std::int64_t x1 = lo1 - 2; x1 <= hi1 + 2; ++x1)
    for (std::int64_t x2 = lo2 - 2; x2 <= hi2 + 2; ++x2) {
      Point w{x1, x2};
      if (C.contains(w)) continue;  // not a region point
      bool any = false;
      for (int i = 0; i < 6 && !any; ++i) {
        bool hits = false;
        for (Point v : C)
          if (cone_contains(i, w, v)) { hits = true; break; }
        any = !hits;
      }
      if (!any) return w;
    }
  return std::nullopt;
}

inline void check_cone_condition(const Region& r) {
  if (auto w = cone_condition_violation(r)) throw ConeConditionViolation(w->x1, w->x2);
}

struct BoundaryEnumeration {
  std::vector<Point> points;                  // lexicographic, pairwise distinct
  std::vector<std::vector<int>> sides;        // per point: all j with y - e_j interior
  std::vector<std::vector<Point>> inward;     // per point: the matching y - e_j
  std::vector<int> primary_side;              // smallest j (Case I single-side reduction)

  std::size_t size() const { return points.size(); }
  int multiplicity(std::size_t i) const { return static_cast<int>(sides[i].size()); }
};

// Sides refer to the interior of the region passed in; for Case II systems pass the
// complement region so that sides are taken w.r.t. interior(Omega^c).
inline BoundaryEnumeration enumerate_boundary(const Region& r) {
  if (r.boundary.empty()) throw EmptyBoundary("region has no boundary points");
  BoundaryEnumeration e;
  for (Point y : r.boundary) {  // std::set iterates lexicographically
    std::vector<int> js;
    std::vector<Point> in;
    for (int j = 1; j <= 6; ++j) {
      Point q = y - direction(j);
      if (r.is_interior(q)) {
        js.push_back(j);
        in.push_back(q);
      }
    }
    if (js.empty()) throw BoundaryContactViolation("boundary point with no interior neighbor");
    e.points.push_back(y);
    e.primary_side.push_back(js.front());
    e.sides.push_back(std::move(js));
    e.inward.push_back(std::move(in));
  }
  return e;
}

}  // namespace trihelm
