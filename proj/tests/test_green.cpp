#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "trihelm/green.hpp"
#include "trihelm/quadrature.hpp"

using namespace trihelm;

namespace {

struct Reference {
  Point x;
  Complex g;
};

// Independently computed Brillouin-zone integrals at eps = 1e-3 (periodic
// trapezoid, grid 65536^2, cross-checked against a residue-based
// single-integral reduction).  These pin both the engine and the production
// quadrature ladder.
const std::vector<Reference> kRefK1 = {
    {{0, 0}, {-2.1094367246572382e-01, -1.5763589208012990e-01}},
    {{1, 0}, {-9.1459997034498697e-03, -1.3132808612136396e-01}},
    {{1, 1}, {5.6963493873236057e-02, -8.5409305689410381e-02}},
    {{2, 1}, {8.2064672210914499e-02, -1.6703050943660862e-02}},
    {{3, 1}, {5.8873463851025799e-02, 4.1397504690831415e-02}},
    {{3, 3}, {-2.2319358536112111e-02, 5.5788054233288337e-02}},
    {{5, 0}, {-1.3160526001940488e-02, 5.9817986713786922e-02}},
    {{4, 2}, {-2.6480709835082862e-02, 5.3336118406095624e-02}},
};
const std::vector<Reference> kRefK2 = {
    {{0, 0}, {-1.9016173994559424e-01, -1.7428770634439122e-01}},
    {{1, 0}, {3.9863125418546426e-02, -1.1616011060626993e-01}},
    {{1, 1}, {9.0828721198864010e-02, -2.9623024293169768e-02}},
    {{2, 1}, {5.3665117192682313e-02, 5.5694977066558488e-02}},
    {{3, 1}, {-2.6076150813274707e-02, 6.0987313358394114e-02}},
    {{3, 3}, {-3.9889145068112287e-02, -3.8187509880562513e-02}},
    {{5, 0}, {-4.8789460530033961e-02, -2.8414326618391307e-02}},
    {{4, 2}, {-3.4909797746646647e-02, -4.2203793415955225e-02}},
};
const std::vector<Reference> kRefK625 = {
    {{0, 0}, {-1.9653082706434896e-01, -3.5935369294732267e-01}},
    {{1, 0}, {1.7479555884552322e-01, 1.5005825677315891e-02}},
    {{1, 1}, {-4.0076026337079199e-02, 1.3114348969034692e-01}},
    {{2, 1}, {-5.3128361970300263e-02, -9.4507534109263394e-02}},
    {{3, 1}, {9.1856477480510360e-02, 2.9636831808057630e-02}},
    {{3, 3}, {-2.6665520030506637e-02, -6.9128210973955356e-02}},
    {{5, 0}, {-7.2165877796180111e-02, -4.8743780123390541e-02}},
    {{4, 2}, {-1.3165331438549309e-02, -7.5112771692221414e-02}},
};

// limiting (vanishing damping) value at the origin for k = sqrt(2)
const Complex kG00Limit{-0.190180462658116, -0.174299897431228};
// origin value at k = 2, eps = 0.1 (perturbed-seed regime)
const Complex kG00KTwoDamped{-1.7752795658237308e-01, -2.2479426462694915e-01};

GreenEngine table_engine(double k) {
  EngineOptions opt;
  opt.eps = 1e-3;
  opt.n_max = 300;
  opt.stability_check = false;
  return GreenEngine(k, opt);
}

}  // namespace

TEST_CASE("shell matrices match the appendix prescriptions") {
  Complex K{2.0, 0.0};
  SparseTriple t1 = sparse_matrices(1, K);
  CHECK(t1.gamma(0, 0) == Complex(2.0, 0.0));  // 4 - k^2
  CHECK(t1.alpha(0, 0) == Complex(1.0, 0.0));
  REQUIRE(t1.beta.rows() == 1);
  REQUIRE(t1.beta.cols() == 2);
  CHECK(t1.beta(0, 0) == Complex(1.0, 0.0));
  CHECK(t1.beta(0, 1) == Complex(2.0, 0.0));

  SparseTriple t2 = sparse_matrices(2, K);
  REQUIRE(t2.alpha.rows() == 2);
  REQUIRE(t2.alpha.cols() == 1);
  CHECK(t2.alpha(0, 0) == Complex(1.0, 0.0));
  CHECK(t2.alpha(1, 0) == Complex(2.0, 0.0));
  CHECK(t2.beta(0, 0) == Complex(1.0, 0.0));
  CHECK(t2.beta(0, 1) == Complex(2.0, 0.0));
  CHECK(t2.beta(1, 0) == Complex(0.0, 0.0));
  CHECK(t2.beta(1, 1) == Complex(2.0, 0.0));
  CHECK(t2.gamma(0, 0) == Complex(4.0, 0.0));  // 6 - k^2
  CHECK(t2.gamma(0, 1) == Complex(-2.0, 0.0));
  CHECK(t2.gamma(1, 0) == Complex(-2.0, 0.0));
  CHECK(t2.gamma(1, 1) == Complex(4.0, 0.0));
}

TEST_CASE("shell matrices keep the recursion shape-valid up to n = 50") {
  Complex K{2.0, 1e-6};
  for (int n = 1; n <= 50; ++n) {
    SparseTriple t = sparse_matrices(n, K);
    CHECK(t.gamma.rows() == shell_dim(n));
    CHECK(t.gamma.cols() == shell_dim(n));
    CHECK(t.alpha.rows() == shell_dim(n));
    CHECK(t.alpha.cols() == (n == 1 ? 1 : shell_dim(n - 1)));
    CHECK(t.beta.rows() == shell_dim(n));
    CHECK(t.beta.cols() == shell_dim(n + 1));
    for (int i = 0; i < t.gamma.rows(); ++i) {
      Complex want = 6.0 - K;
      if (n == 1) want = 4.0 - K;
      else if (n % 2 == 1 && i == t.gamma.rows() - 1) want = 5.0 - K;
      CHECK(t.gamma(i, i) == want);
    }
  }
}

TEST_CASE("canonical representative") {
  CHECK(canonicalize({0, 0}) == Point{0, 0});
  CHECK(canonicalize({0, 1}) == Point{1, 0});
  CHECK(canonicalize({-1, 1}) == Point{1, 0});
  CHECK(canonicalize({-2, -3}) == Point{3, 2});
  for (std::int64_t a = -6; a <= 6; ++a)
    for (std::int64_t b = -6; b <= 6; ++b) {
      Point c = canonicalize({a, b});
      CHECK(c.x1 >= c.x2);
      CHECK(c.x2 >= 0);
      CHECK(hexdist(c) == hexdist({a, b}));
      CHECK(canonicalize(c) == c);
      CHECK(symmetry_orbit({a, b}).size() <= 12);
    }
}

TEST_CASE("stored symmetries are exact and the origin identity holds") {
  GreenEngine e(std::sqrt(2.0));
  Complex a1 = e.propagation_matrix(1)(0, 0);
  CHECK(e.g00() == 1.0 / (6.0 * a1 - 6.0 + e.ksq()));
  CHECK(e.green({0, 0}) == e.g00());
  CHECK(e.green({1, 0}) == e.green({0, 1}));
  CHECK(e.green({1, 0}) == e.green({-1, 1}));
  for (Point x : {Point{3, 1}, Point{-2, 5}, Point{4, -1}}) {
    Complex g = e.green(x);
    CHECK(e.green({x.x2, x.x1}) == g);
    CHECK(e.green({-x.x1, -x.x2}) == g);
    CHECK(e.green({x.x1 + x.x2, -x.x2}) == g);
  }
}

TEST_CASE("out-of-range requests are rejected") {
  EngineOptions opt;
  opt.n_request = 5;  // -> truncation 80
  opt.stability_check = false;
  GreenEngine e(std::sqrt(2.0), opt);
  CHECK(e.n_max() == 80);
  CHECK_NOTHROW(e.green({80, 0}));
  CHECK_THROWS_AS(e.green({81, 0}), OutOfRange);
  CHECK_THROWS_AS(e.green({-50, -31}), OutOfRange);
  CHECK_THROWS_AS(helmholtz_residual(e, 80), OutOfRange);
}

TEST_CASE("shell vectors satisfy the three-term recursion") {
  GreenEngine e(std::sqrt(2.0));
  for (int n = 1; n < 40; ++n) {
    SparseTriple t = sparse_matrices(n, e.ksq());
    CVector lhs = t.gamma * e.shell_values(n);
    CVector rhs = t.alpha * e.shell_values(n - 1) + t.beta * e.shell_values(n + 1);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("stencil residual vanishes to rounding at the default wave number") {
  EngineOptions opt;
  opt.n_max = 120;
  opt.stability_check = false;
  GreenEngine e(std::sqrt(2.0), opt);
  double r0 = std::abs(6.0 * e.green({1, 0}) - (6.0 - e.ksq()) * e.g00() - 1.0);
  CHECK(helmholtz_residual(e, 0) == Catch::Approx(r0).margin(1e-15));
  CHECK(helmholtz_residual(e, 20) <= 1e-10);
}

TEST_CASE("engine matches independently computed reference values") {
  struct Case {
    double k;
    const std::vector<Reference>* tab;
  };
  for (auto [k, tab] : {Case{1.0, &kRefK1}, Case{std::sqrt(2.0), &kRefK2}, Case{2.5, &kRefK625}}) {
    GreenEngine e = table_engine(k);
    for (const Reference& r : *tab) CHECK(std::abs(e.green(r.x) - r.g) < 2e-7);
  }
}

TEST_CASE("quadrature ladder matches reference values and the engine") {
  double k = std::sqrt(2.0);
  std::vector<Point> pts;
  for (const Reference& r : kRefK2) pts.push_back(r.x);
  OracleOptions q;
  q.tol = 1e-7;
  OracleResult res = green_quadrature_oracle_batch(pts, k, 1e-3, q);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(res.values[i] - kRefK2[i].g) < 3e-7);

  // matched-damping engine/oracle agreement at a tighter tolerance
  EngineOptions opt;
  opt.eps = 1e-2;
  opt.n_max = 400;
  opt.stability_check = false;
  GreenEngine e(k, opt);
  OracleOptions q2;
  q2.tol = 1e-9;
  OracleResult res2 = green_quadrature_oracle_batch(pts, k, 1e-2, q2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK(std::abs(res2.values[i] - e.green(pts[i])) < 1e-8);
}

TEST_CASE("quadrature respects the lattice symmetries without shared storage") {
  OracleOptions q;
  q.tol = 1e-9;
  double k = std::sqrt(2.0);
  OracleResult r = green_quadrature_oracle_batch(
      {{1, 0}, {0, 1}, {-1, 1}, {2, 1}, {1, 2}, {-2, -1}, {3, -1}}, k, 1e-2, q);
  CHECK(std::abs(r.values[0] - r.values[1]) < 1e-8);
  CHECK(std::abs(r.values[0] - r.values[2]) < 1e-8);
  CHECK(std::abs(r.values[3] - r.values[4]) < 1e-8);
  CHECK(std::abs(r.values[3] - r.values[5]) < 1e-8);
  CHECK(std::abs(r.values[3] - r.values[6]) < 1e-8);
}

TEST_CASE("vanishing-damping extrapolation agrees between engine and quadrature") {
  double k = std::sqrt(2.0);
  Complex qlim = oracle_extrapolated({0, 0}, k, 1e-2);
  CHECK(std::abs(qlim - kG00Limit) < 2e-6);
  Complex elim = green_extrapolated({0, 0}, k, 1e-2, 40);
  CHECK(std::abs(elim - kG00Limit) < 2e-6);
}

TEST_CASE("damping selects a stable radiating branch") {
  for (double k : {1.0, std::sqrt(2.0), 2.5})
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      EngineOptions opt;
      opt.eps = eps;
      opt.n_request = 1;
      opt.stability_check = false;
      GreenEngine e(k, opt);
      CHECK(e.g00().imag() < 0);
    }
}

TEST_CASE("values are stable under deeper truncation in the damped regime") {
  EngineOptions opt;
  opt.eps = 0.1;
  opt.n_max = 300;
  GreenEngine e(std::sqrt(2.0), opt);
  CHECK(e.truncation_defect() >= 0);
  CHECK(e.truncation_defect() < 1e-12);
}

TEST_CASE("degenerate wave number: zero seed fails, perturbed seed recovers") {
  CMatrix zero_seed = make_seed(SeedSpec::zero(), 60, 2.0, Complex(4.0, 0.0));
  CHECK_THROWS_AS(propagation_matrices(2.0, 0.0, 60, zero_seed), SingularStep);

  EngineOptions opt;
  opt.eps = 0.0;
  opt.n_max = 120;
  opt.seed = SeedSpec::scaled_identity(Complex(0.0, 1e-6));
  opt.stability_check = false;
  GreenEngine e(2.0, opt);
  CHECK(helmholtz_residual(e, 10) <= 1e-8);

  EngineOptions damped = opt;
  damped.eps = 0.1;
  damped.n_max = 400;
  GreenEngine ed(2.0, damped);
  CHECK(std::abs(ed.g00() - kG00KTwoDamped) < 1e-9);
  Complex q = green_quadrature_oracle({0, 0}, 2.0, 0.1, {.tol = 1e-9});
  CHECK(std::abs(ed.g00() - q) < 1e-5);
}

TEST_CASE("radiating seed has the expected sparsity layout") {
  for (int n : {40, 41}) {
    CMatrix a = radiating_seed(n, std::sqrt(2.0), Complex(2.0, 1e-3));
    REQUIRE(a.rows() == shell_dim(n + 1));
    REQUIRE(a.cols() == shell_dim(n));
    int nonzero = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (a(i, j) != Complex(0, 0)) ++nonzero;
    CHECK(nonzero == a.rows());
  }
}

TEST_CASE("oracle rejects invalid parameters") {
  CHECK_THROWS_AS(green_quadrature_oracle({0, 0}, std::sqrt(2.0), 0.0), ValidationError);
  OracleOptions q;
  q.tol = 1e-13;
  q.m_cap = 2048;
  CHECK_THROWS_AS(green_quadrature_oracle({5, 0}, std::sqrt(2.0), 1e-4, q), ToleranceNotReached);
}
