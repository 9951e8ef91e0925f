#pragma once

// Radiating lattice Green's function via the backward propagation-matrix
// recursion.  Values are stored per Manhattan shell and served through the
// canonical (i >= j >= 0) representative, so the symmetry identities hold
// exactly by construction.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "trihelm/dispersion.hpp"
#include "trihelm/errors.hpp"
#include "trihelm/lattice.hpp"

namespace trihelm {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Number of distinct values on shell n: V_n = (G(n,0), G(n-1,1), ..., G(n-p,p))
// with p = n/2, so both n=2p and n=2p+1 hold p+1 entries.
inline int shell_dim(int n) { return n / 2 + 1; }

struct SparseTriple {
  int n = 1;
  CMatrix alpha, beta, gamma;
};

// Shell-coupling matrices of the three-term recursion
// gamma_n V_n = alpha_n V_{n-1} + beta_n V_{n+1}.  All index rules below are
// stated 1-based and shifted when poking the 0-based storage.
inline SparseTriple sparse_matrices(int n, Complex K) {
  if (n < 1) throw ValidationError("shell index must be >= 1");
  SparseTriple t;
  t.n = n;
  if (n == 1) {
    t.alpha = CMatrix::Constant(1, 1, 1.0);
    t.beta = CMatrix::Zero(1, 2);
    t.beta(0, 0) = 1.0;
    t.beta(0, 1) = 2.0;
    t.gamma = CMatrix::Constant(1, 1, 4.0 - K);
    return t;
  }
  if (n % 2 == 0) {
    int p = n / 2;
    t.alpha = CMatrix::Zero(p + 1, p);
    t.beta = CMatrix::Zero(p + 1, p + 1);
    t.gamma = CMatrix::Zero(p + 1, p + 1);
    for (int i = 1; i <= p; ++i) t.alpha(i - 1, i - 1) = 1.0;
    for (int i = 2; i <= p; ++i) t.alpha(i - 1, i - 2) = 1.0;
    t.alpha(p, p - 1) = 2.0;
    for (int i = 1; i <= p; ++i) t.beta(i - 1, i - 1) = 1.0;
    for (int i = 2; i <= p; ++i) t.beta(i - 1, i) = 1.0;
    t.beta(p, p) = 2.0;
    t.beta(0, 1) = 2.0;
    for (int i = 1; i <= p + 1; ++i) t.gamma(i - 1, i - 1) = 6.0 - K;
    for (int i = 2; i <= p; ++i) {
      t.gamma(i - 1, i) = -1.0;
      t.gamma(i - 1, i - 2) = -1.0;
    }
    t.gamma(0, 1) = -2.0;
    t.gamma(p, p - 1) = -2.0;
  } else {
    int p = (n - 1) / 2;
    t.alpha = CMatrix::Zero(p + 1, p + 1);
    t.beta = CMatrix::Zero(p + 1, p + 2);
    t.gamma = CMatrix::Zero(p + 1, p + 1);
    for (int i = 1; i <= p + 1; ++i) t.alpha(i - 1, i - 1) = 1.0;
    for (int i = 2; i <= p + 1; ++i) t.alpha(i - 1, i - 2) = 1.0;
    for (int i = 1; i <= p + 1; ++i) t.beta(i - 1, i - 1) = 1.0;
    for (int i = 2; i <= p + 1; ++i) t.beta(i - 1, i) = 1.0;
    t.beta(0, 1) = 2.0;
    for (int i = 1; i <= p; ++i) t.gamma(i - 1, i - 1) = 6.0 - K;
    t.gamma(p, p) = 5.0 - K;
    for (int i = 2; i <= p; ++i) t.gamma(i - 1, i) = -1.0;
    for (int i = 2; i <= p + 1; ++i) t.gamma(i - 1, i - 2) = -1.0;
    t.gamma(0, 1) = -2.0;
  }
  return t;
}

// ---- truncation seeds -------------------------------------------------

struct SeedSpec {
  enum class Kind { Zero, ScaledIdentity, Radiating };
  Kind kind = Kind::Radiating;
  Complex factor{0.0, 0.0};

  static SeedSpec zero() { return {Kind::Zero, {}}; }
  static SeedSpec scaled_identity(Complex f) { return {Kind::ScaledIdentity, f}; }
  static SeedSpec radiating() { return {}; }
};

// Outgoing-wave guess for A_{N+1}: each entry maps the shell-N value at x_old
// to the shell-(N+1) value at x_new one lattice step further out, using the
// stationary-phase form  u ~ zeta(alpha)/sqrt(kappa(alpha)) * e^{i xi*.x} / sqrt(|x|)
// continued to the damped wave number K = k^2 + i eps.
inline CMatrix radiating_seed(int N, double k, Complex K) {
  int n2 = N + 1;
  int rows = shell_dim(n2), cols = shell_dim(N);
  CMatrix A = CMatrix::Zero(rows, cols);
  SaddlePoint prev{};
  bool have_prev = false;
  for (int j = 0; j < rows; ++j) {
    Point x_new{n2 - j, j};
    Point x_old{};
    int col = 0;
    if (j <= N / 2) {
      x_old = {N - j, j};  // step along e1
      col = j;
    } else {
      x_old = {n2 - j, j - 1};  // last row of an even shell: step along e2
      col = j - 1;
    }
    double a_new = lattice_direction_angle(x_new);
    double a_old = lattice_direction_angle(x_old);
    SaddlePoint rs = have_prev ? solve_dispersion_from(prev, a_new, k)
                               : solve_dispersion(a_new, k);
    prev = rs;
    have_prev = true;
    SaddlePoint ro = solve_dispersion_from(rs, a_old, k);
    ComplexSaddle cn = continue_to_complex(rs, K);
    ComplexSaddle co = continue_to_complex(ro, K);
    Complex mu_new = cn.xi1 * static_cast<double>(x_new.x1) + cn.xi2 * static_cast<double>(x_new.x2);
    Complex mu_old = co.xi1 * static_cast<double>(x_old.x1) + co.xi2 * static_cast<double>(x_old.x2);
    Complex kap_new = curve_curvature(cn.xi1, cn.xi2);
    Complex kap_old = curve_curvature(co.xi1, co.xi2);
    double r_new = std::hypot(static_cast<double>(x_new.x1), static_cast<double>(x_new.x2));
    double r_old = std::hypot(static_cast<double>(x_old.x1), static_cast<double>(x_old.x2));
    Complex amp = (cn.zeta / co.zeta) * std::sqrt(kap_old / kap_new) * std::sqrt(r_old / r_new);
    A(j, col) = amp * std::exp(Complex(0.0, 1.0) * (mu_new - mu_old));
  }
  return A;
}

inline CMatrix make_seed(const SeedSpec& s, int n_max, double k, Complex K) {
  int rows = shell_dim(n_max + 1), cols = shell_dim(n_max);
  switch (s.kind) {
    case SeedSpec::Kind::Zero:
      return CMatrix::Zero(rows, cols);
    case SeedSpec::Kind::ScaledIdentity:
      return s.factor * CMatrix::Identity(rows, cols);
    case SeedSpec::Kind::Radiating:
      return radiating_seed(n_max, k, K);
  }
  throw Error("unknown seed kind");
}

// ---- backward recursion ------------------------------------------------

namespace detail {

// A_n = [gamma_n - beta_n A_{n+1}]^{-1} alpha_n for n = N..1.  Returns
// A_1..A_keep (index n-1); shells above keep_upto are used but not stored.
inline std::vector<CMatrix> backward_chain(Complex K, int n_max, CMatrix seed, int keep_upto) {
  std::vector<CMatrix> kept(static_cast<std::size_t>(keep_upto));
  CMatrix next = std::move(seed);
  for (int n = n_max; n >= 1; --n) {
    SparseTriple t = sparse_matrices(n, K);
    CMatrix m = t.gamma - t.beta * next;
    Eigen::PartialPivLU<CMatrix> lu(m);
    if (!(lu.rcond() > 1e-14)) throw SingularStep(n);
    next = lu.solve(t.alpha);
    if (n <= keep_upto) kept[static_cast<std::size_t>(n - 1)] = next;
  }
  return kept;
}

}  // namespace detail

inline std::vector<CMatrix> propagation_matrices(double k, double eps, int n_max,
                                                 const CMatrix& seed) {
  if (n_max < 1) throw ValidationError("truncation shell must be >= 1");
  return detail::backward_chain(Complex(k * k, eps), n_max, seed, n_max);
}

// ---- symmetry reduction --------------------------------------------------

// Full orbit of x under the group generated by swap, negation and the shear
// (x1,x2) -> (x1+x2,-x2); at most 12 points.
inline PointSet symmetry_orbit(Point x) {
  PointSet orbit;
  std::vector<Point> frontier{x};
  while (!frontier.empty()) {
    std::vector<Point> next;
    for (Point p : frontier) {
      if (!orbit.insert(p).second) continue;
      for (Point q : {Point{p.x2, p.x1}, Point{-p.x1, -p.x2}, Point{p.x1 + p.x2, -p.x2}})
        if (!orbit.count(q)) next.push_back(q);
    }
    frontier = std::move(next);
  }
  return orbit;
}

inline Point canonicalize(Point x) {
  Point found{};
  int hits = 0;
  for (Point p : symmetry_orbit(x))
    if (p.x1 >= p.x2 && p.x2 >= 0) {
      found = p;
      ++hits;
    }
  if (hits != 1) throw Error("symmetry orbit lacks a unique canonical member");
  return found;
}

// ---- the engine -----------------------------------------------------------

struct EngineOptions {
  double eps = 1e-6;     // damping: k^2 is replaced by k^2 + i*eps
  int n_request = 20;    // largest Manhattan distance the engine must serve
  int n_max = 0;         // explicit truncation shell; 0 = max(4*n_request, 80)
  SeedSpec seed{};       // radiating by default
  bool stability_check = true;
};

class GreenEngine {
 public:
  explicit GreenEngine(double k, EngineOptions opt = {}) : k_(k), eps_(opt.eps) {
    validate_wave_number(k_);
    if (eps_ < 0) throw ValidationError("damping must be nonnegative");
    n_max_ = opt.n_max > 0 ? opt.n_max : std::max(4 * opt.n_request, 80);
    Complex K = ksq();
    a_ = detail::backward_chain(K, n_max_, make_seed(opt.seed, n_max_, k_, K), n_max_);
    v_ = materialize(a_, n_max_, K);
    if (opt.stability_check) {
      int deeper = n_max_ + 20;
      int probe = n_max_ / 4;
      auto a2 = detail::backward_chain(K, deeper, make_seed(opt.seed, deeper, k_, K),
                                       std::max(probe, 1));
      auto v2 = materialize(a2, probe, K);
      truncation_defect_ = 0.0;
      for (int n = 0; n <= probe; ++n)
        truncation_defect_ = std::max(truncation_defect_, (v_[static_cast<std::size_t>(n)] -
                                                           v2[static_cast<std::size_t>(n)])
                                                              .cwiseAbs()
                                                              .maxCoeff());
    }
  }

  double k() const { return k_; }
  double eps() const { return eps_; }
  int n_max() const { return n_max_; }
  Complex ksq() const { return Complex(k_ * k_, eps_); }
  Complex g00() const { return v_[0](0); }

  // Max change of any served value when the truncation is pushed 20 shells
  // deeper, probed up to n_max/4; negative when the check was skipped.
  double truncation_defect() const { return truncation_defect_; }

  const CMatrix& propagation_matrix(int n) const {
    if (n < 1 || n > n_max_) throw OutOfRange("shell index outside stored range");
    return a_[static_cast<std::size_t>(n - 1)];
  }
  const CVector& shell_values(int n) const {
    if (n < 0 || n > n_max_) throw OutOfRange("shell index outside stored range");
    return v_[static_cast<std::size_t>(n)];
  }

  Complex green(Point x) const {
    Point c = canonicalize(x);
    int n = static_cast<int>(c.x1 + c.x2);
    if (n > n_max_) throw OutOfRange("lattice point beyond engine truncation");
    return v_[static_cast<std::size_t>(n)](static_cast<Eigen::Index>(c.x2));
  }
  Complex operator()(Point x) const { return green(x); }

 private:
  static std::vector<CVector> materialize(const std::vector<CMatrix>& a, int upto, Complex K) {
    std::vector<CVector> v(static_cast<std::size_t>(upto) + 1);
    Complex a1 = a[0](0, 0);
    v[0] = CVector::Constant(1, 1.0 / (6.0 * a1 - 6.0 + K));
    for (int n = 1; n <= upto; ++n)
      v[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(n - 1)] * v[static_cast<std::size_t>(n - 1)];
    return v;
  }

  double k_, eps_;
  int n_max_;
  std::vector<CMatrix> a_;  // A_1..A_{n_max}
  std::vector<CVector> v_;  // V_0..V_{n_max}
  double truncation_defect_ = -1.0;
};

// Max stencil defect of (Delta_d + k^2 + i eps)G - delta over the ball of the
// given Manhattan radius.
inline double helmholtz_residual(const GreenEngine& engine, int radius) {
  if (radius + 1 > engine.n_max()) throw OutOfRange("radius + 1 beyond engine truncation");
  Complex damped = 6.0 - engine.ksq();
  double worst = 0.0;
  for (std::int64_t x1 = -radius; x1 <= radius; ++x1)
    for (std::int64_t x2 = -radius; x2 <= radius; ++x2) {
      Point x{x1, x2};
      if (hexdist(x) > radius) continue;
      Complex acc = 0.0;
      for (Point d : kDirections) acc += engine.green(x + d);
      acc -= damped * engine.green(x);
      if (x1 == 0 && x2 == 0) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  return worst;
}

// Richardson extrapolation of G(x) toward vanishing damping: three engines at
// eps, eps/2, eps/4 and elimination of the first two powers.
inline Complex green_extrapolated(Point x, double k, double eps, int n_request) {
  EngineOptions opt;
  opt.n_request = n_request;
  opt.stability_check = false;
  Complex f[3];
  for (int i = 0; i < 3; ++i) {
    opt.eps = eps / static_cast<double>(1 << i);
    f[i] = GreenEngine(k, opt).green(x);
  }
  Complex g0 = 2.0 * f[1] - f[0];
  Complex g1 = 2.0 * f[2] - f[1];
  return (4.0 * g1 - g0) / 3.0;
}

}  // namespace trihelm
