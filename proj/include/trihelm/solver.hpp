#pragma once

// Boundary-system solver for the exterior problem: assemble the dense system
// for the chosen ansatz, factor it with partial pivoting, evaluate the
// resulting layer-potential field over a rectangular window, and summarize
// boundary / stencil / decay residuals.  Every Green evaluation of a run goes
// through one shared engine so all sums see identical truncation.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "trihelm/errors.hpp"
#include "trihelm/green.hpp"
#include "trihelm/lattice.hpp"
#include "trihelm/potentials.hpp"

namespace trihelm {

enum class ProblemCase {
  CaseI,   // scatterer is a bare point set; ansatz u = sum_i G(x-y_i) phi_i
  CaseII,  // scatterer has interior; combined ansatz with coupling eta
};

// Rectangular evaluation window in lattice coordinates, bounds inclusive.
struct Window {
  std::int64_t x1_min = -15, x1_max = 20;
  std::int64_t x2_min = -15, x2_max = 20;

  bool contains(Point p) const {
    return p.x1 >= x1_min && p.x1 <= x1_max && p.x2 >= x2_min && p.x2 <= x2_max;
  }
  std::int64_t width() const { return x1_max - x1_min + 1; }
  std::int64_t height() const { return x2_max - x2_min + 1; }
  Window dilated(std::int64_t d) const { return {x1_min - d, x1_max + d, x2_min - d, x2_max + d}; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct ProblemSpec {
  // Case I: cofinite region whose boundary holds the scatterer points.
  // Case II: the finite complement (interior + its boundary); sides and inward
  // shifts of the enumeration are taken w.r.t. the complement interior.
  Region scatterer;
  double k = 1.4142135623730951;
  std::vector<Complex> f;  // boundary data, one value per enumerated boundary point
  double eta = 1.0;        // Case II coupling, nonzero
  double eps = 1e-6;       // engine damping
  int n_max = 0;           // engine truncation; 0 = automatic from geometry + window
  Window window{};
};

inline ProblemCase problem_case(const ProblemSpec& spec) {
  return spec.scatterer.kind == Region::Kind::Cofinite ? ProblemCase::CaseI : ProblemCase::CaseII;
}

// Interior of the propagation domain, i.e. everything off the scatterer.
inline bool domain_interior(const ProblemSpec& spec, Point p) {
  if (spec.scatterer.boundary.contains(p)) return false;
  return problem_case(spec) == ProblemCase::CaseI || !spec.scatterer.interior.contains(p);
}

inline std::vector<Complex> uniform_boundary_data(const Region& scatterer, Complex value) {
  return std::vector<Complex>(scatterer.boundary.size(), value);
}

struct BoundarySystem {
  ProblemCase kind = ProblemCase::CaseI;
  BoundaryEnumeration boundary;
  CMatrix M;
  CVector F;
  CVector Phi;           // filled by solve_system
  double condition = 0;  // 1-norm condition estimate of M, filled by solve_system
  std::shared_ptr<const GreenEngine> engine;  // shared by assembly and evaluation
};

namespace detail {

inline void validate_problem(const ProblemSpec& spec) {
  validate_wave_number(spec.k);
  if (spec.eps < 0) throw ValidationError("damping must be nonnegative");
  if (problem_case(spec) == ProblemCase::CaseII && spec.eta == 0)
    throw ValidationError("coupling parameter must be nonzero");
  if (spec.window.x1_min > spec.window.x1_max || spec.window.x2_min > spec.window.x2_max)
    throw ValidationError("empty evaluation window");
}

// Largest canonical shell the shared engine must serve: pairwise differences
// of the sum sources (boundary points and their inward shifts) for assembly,
// plus window-to-source differences for evaluation.  The window gains one
// ring so stencil checks can cover it fully; the hex norm is convex, so the
// window maximum sits at a corner.
inline int required_shell(const ProblemSpec& spec, const BoundaryEnumeration& b) {
  std::vector<Point> sources = b.points;
  for (const auto& in : b.inward) sources.insert(sources.end(), in.begin(), in.end());
  std::int64_t need = 0;
  for (Point a : sources)
    for (Point c : sources) need = std::max(need, hexdist(a - c));
  Window w = spec.window.dilated(1);
  const Point corners[4] = {
      {w.x1_min, w.x2_min}, {w.x1_min, w.x2_max}, {w.x1_max, w.x2_min}, {w.x1_max, w.x2_max}};
  for (Point c : corners)
    for (Point s : sources) need = std::max(need, hexdist(c - s));
  return static_cast<int>(need);
}

inline std::shared_ptr<const GreenEngine> make_shared_engine(const ProblemSpec& spec,
                                                             const BoundaryEnumeration& b) {
  EngineOptions opt;
  opt.eps = spec.eps;
  opt.n_request = required_shell(spec, b);
  opt.n_max = spec.n_max;
  return std::make_shared<const GreenEngine>(spec.k, opt);
}

inline void require_data(const ProblemSpec& spec, const BoundaryEnumeration& b) {
  if (spec.f.size() != b.size())
    throw ValidationError("boundary data must provide one value per enumerated boundary point");
}

}  // namespace detail

// System for the bare point-set scatterer: M_ij = G(y_i - y_j).
inline BoundarySystem assemble_case1(const ProblemSpec& spec) {
  if (problem_case(spec) != ProblemCase::CaseI)
    throw CaseMismatch("expected a cofinite scatterer (bare boundary point set)");
  detail::validate_problem(spec);
  BoundarySystem s;
  s.kind = ProblemCase::CaseI;
  s.boundary = enumerate_boundary(spec.scatterer);
  detail::require_data(spec, s.boundary);
  s.engine = detail::make_shared_engine(spec, s.boundary);
  const auto m = static_cast<Eigen::Index>(s.boundary.size());
  s.M.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      s.M(i, j) = s.engine->green(s.boundary.points[static_cast<std::size_t>(i)] -
                                  s.boundary.points[static_cast<std::size_t>(j)]);
  s.F = Eigen::Map<const CVector>(spec.f.data(), m);
  return s;
}

// System for the scatterer with interior:
//   M = (1 + i eta) H N - K,   H_ij = G(y_i - y_j),  N = diag(n_j),
//   K_ij = sum over the inward shifts y_j - e_l of G(y_i - (y_j - e_l)).
inline BoundarySystem assemble_case2(const ProblemSpec& spec) {
  if (problem_case(spec) != ProblemCase::CaseII || spec.scatterer.interior.empty())
    throw CaseMismatch("expected a finite complement with nonempty interior");
  detail::validate_problem(spec);
  BoundarySystem s;
  s.kind = ProblemCase::CaseII;
  s.boundary = enumerate_boundary(spec.scatterer);
  detail::require_data(spec, s.boundary);
  s.engine = detail::make_shared_engine(spec, s.boundary);
  const auto m = static_cast<Eigen::Index>(s.boundary.size());
  const Complex weight = Complex(1.0, spec.eta);
  s.M.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Point yi = s.boundary.points[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j) {
      auto ju = static_cast<std::size_t>(j);
      Complex hij = s.engine->green(yi - s.boundary.points[ju]);
      Complex kij(0, 0);
      for (Point in : s.boundary.inward[ju]) kij += s.engine->green(yi - in);
      s.M(i, j) = weight * static_cast<double>(s.boundary.multiplicity(ju)) * hij - kij;
    }
  }
  s.F = Eigen::Map<const CVector>(spec.f.data(), m);
  return s;
}

inline BoundarySystem assemble(const ProblemSpec& spec) {
  return problem_case(spec) == ProblemCase::CaseI ? assemble_case1(spec) : assemble_case2(spec);
}

// Dense partial-pivot solve.  Reports the condition estimate, rejects
// near-singular systems, and enforces the solve-residual contract.
inline const CVector& solve_system(BoundarySystem& s) {
  if (s.M.rows() == 0 || s.M.rows() != s.M.cols())
    throw ValidationError("boundary system is not assembled");
  Eigen::PartialPivLU<CMatrix> lu(s.M);
  double rc = lu.rcond();
  s.condition = rc > 0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (!(rc > 1e-14))
    throw NumericallySingular("boundary system condition estimate exceeds 1e14");
  s.Phi = lu.solve(s.F);
  double scale = 1.0 + s.F.cwiseAbs().maxCoeff();
  double residual = (s.M * s.Phi - s.F).cwiseAbs().maxCoeff();
  if (residual > 1e-12 * scale)
    throw NumericallySingular("solve residual exceeds 1e-12 relative tolerance");
  return s.Phi;
}

struct FieldGrid {
  double k = 0, eps = 0;
  ProblemCase kind = ProblemCase::CaseI;
  Window window{};
  double condition = 0;         // condition estimate of the solved system
  std::vector<Point> points;    // full window scan, lexicographic
  std::vector<Complex> values;  // aligned with points; zero placeholder at holes
  std::vector<char> hole;       // nonzero marks scatterer-interior points (no value)
  std::size_t hole_count = 0;

  std::optional<Complex> at(Point p) const {
    if (!window.contains(p)) return std::nullopt;
    auto idx = static_cast<std::size_t>((p.x1 - window.x1_min) * window.height() +
                                        (p.x2 - window.x2_min));
    if (hole[idx]) return std::nullopt;
    return values[idx];
  }
};

// Evaluate the solved ansatz over the window.  Case I: u = sum_i G(x-y_i) Phi_i.
// Case II: u = (1+i eta) sum_j n_j G(x-y_j) Phi_j - sum_j sum_l G(x-y_j+e_l) Phi_j.
// Scatterer-interior points carry a hole marker instead of a value.
inline FieldGrid evaluate_field(const ProblemSpec& spec, const BoundarySystem& system,
                                const Window& window) {
  if (system.kind != problem_case(spec))
    throw CaseMismatch("system was assembled for the other problem case");
  if (system.Phi.size() != static_cast<Eigen::Index>(system.boundary.size()))
    throw ValidationError("boundary system is not solved");
  const GreenEngine& g = *system.engine;
  const BoundaryDensity phi(system.Phi.data(), system.Phi.data() + system.Phi.size());
  const Complex ieta(0, spec.eta);

  FieldGrid grid;
  grid.k = spec.k;
  grid.eps = spec.eps;
  grid.kind = system.kind;
  grid.window = window;
  grid.condition = system.condition;
  auto total = static_cast<std::size_t>(window.width() * window.height());
  grid.points.reserve(total);
  grid.values.reserve(total);
  grid.hole.reserve(total);
  for (std::int64_t x1 = window.x1_min; x1 <= window.x1_max; ++x1)
    for (std::int64_t x2 = window.x2_min; x2 <= window.x2_max; ++x2) {
      Point p{x1, x2};
      grid.points.push_back(p);
      if (grid.kind == ProblemCase::CaseII && spec.scatterer.interior.contains(p)) {
        grid.hole.push_back(1);
        grid.values.push_back(Complex(0, 0));
        ++grid.hole_count;
        continue;
      }
      grid.hole.push_back(0);
      Complex u = grid.kind == ProblemCase::CaseI
                      ? single_layer(system.boundary, g, phi, p)
                      : double_layer_complement(spec.scatterer, system.boundary, g, phi, p) +
                            ieta * single_layer_weighted(system.boundary, g, phi, p);
      grid.values.push_back(u);
    }
  return grid;
}

inline FieldGrid evaluate_field(const ProblemSpec& spec, const BoundarySystem& system) {
  return evaluate_field(spec, system, spec.window);
}

struct ResidualReport {
  double boundary_max = 0;     // max |u(y_i) - f(y_i)| over boundary points in the window
  double interior_max = 0;     // max |stencil residual| over full-stencil domain points
  double condition = 0;        // carried over from the solve
  double decay_deviation = 0;  // max over rays of | |u| sqrt(r) - ray median |
  std::size_t boundary_checked = 0, interior_checked = 0, decay_samples = 0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Diagnostics over an evaluated grid: boundary reproduction, interior stencil
// residual against the damped operator, and the flatness of |u| sqrt(r) along
// the six lattice rays from the boundary centroid.
inline ResidualReport residual_report(const FieldGrid& grid, const ProblemSpec& spec) {
  ResidualReport rep;
  rep.condition = grid.condition;
  BoundaryEnumeration b = enumerate_boundary(spec.scatterer);
  detail::require_data(spec, b);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (auto u = grid.at(b.points[i])) {
      rep.boundary_max = std::max(rep.boundary_max, std::abs(*u - spec.f[i]));
      ++rep.boundary_checked;
    }

  const Complex damped = 6.0 - Complex(spec.k * spec.k, spec.eps);
  for (std::size_t idx = 0; idx < grid.points.size(); ++idx) {
    Point p = grid.points[idx];
    if (grid.hole[idx] || !domain_interior(spec, p)) continue;
    Complex acc = -damped * grid.values[idx];
    bool full = true;
    for (Point q : neighborhood(p)) {
      auto v = grid.at(q);
      if (!v) {
        full = false;
        break;
      }
      acc += *v;
    }
    if (!full) continue;
    rep.interior_max = std::max(rep.interior_max, std::abs(acc));
    ++rep.interior_checked;
  }

  // decay probe: walk the six directions from the lattice point nearest the
  // boundary centroid, sampling r >= 5 (embedded distance from the centroid)
  constexpr double kRoot3Half = 0.8660254037844386467637231707529362;
  double cex = 0, cey = 0;
  for (Point y : b.points) {
    EmbeddedPoint e = embed(y);
    cex += e.ex;
    cey += e.ey;
  }
  cex /= static_cast<double>(b.size());
  cey /= static_cast<double>(b.size());
  std::int64_t c2 = std::llround(cey / kRoot3Half);
  std::int64_t c1 = std::llround(cex - 0.5 * static_cast<double>(c2));
  Point center{c1, c2};
  for (int j = 1; j <= 6; ++j) {
    std::vector<double> s;
    for (Point p = center + direction(j); grid.window.contains(p); p = p + direction(j)) {
      auto u = grid.at(p);
      if (!u || !domain_interior(spec, p)) continue;
      EmbeddedPoint e = embed(p);
      double r = std::hypot(e.ex - cex, e.ey - cey);
      if (r < 5.0) continue;
      s.push_back(std::abs(*u) * std::sqrt(r));
    }
    if (s.size() < 3) continue;
    rep.decay_samples += s.size();
    double med = detail::median_of(s);
    for (double v : s) rep.decay_deviation = std::max(rep.decay_deviation, std::abs(v - med));
  }
  return rep;
}

}  // namespace trihelm
