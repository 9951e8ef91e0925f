#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "trihelm/dispersion.hpp"

using namespace trihelm;
using std::numbers::pi;

namespace {

double system_residual(const SaddlePoint& s) {
  double f1 = 2 * s.zeta * (std::sin(s.xi1) + std::sin(s.xi1 - s.xi2)) - std::cos(s.alpha);
  double f2 = 2 * s.zeta * (std::sin(s.xi2) - std::sin(s.xi1 - s.xi2)) - std::sin(s.alpha);
  double f3 = s.k * s.k - 6 + 2 * std::cos(s.xi1) + 2 * std::cos(s.xi2) + 2 * std::cos(s.xi1 - s.xi2);
  return std::max({std::fabs(f1), std::fabs(f2), std::fabs(f3)});
}

}  // namespace

TEST_CASE("symmetric direction solution is analytic") {
  SaddlePoint s = solve_dispersion(pi / 4, std::sqrt(2.0));
  CHECK(std::fabs(s.xi1 - pi / 3) < 1e-10);
  CHECK(std::fabs(s.xi2 - pi / 3) < 1e-10);
  CHECK(std::fabs(s.zeta - std::sqrt(2.0) / (2 * std::sqrt(3.0))) < 1e-10);
  CHECK(std::fabs(s.mu() - (pi / 3) * std::sqrt(2.0)) < 1e-10);
}

TEST_CASE("axis direction satisfies the reduced relations") {
  SaddlePoint s = solve_dispersion(0.0, std::sqrt(2.0));
  CHECK(std::fabs(s.xi1 - 2 * s.xi2) < 1e-10);
  CHECK(std::fabs(std::cos(s.xi2) - (-1 + std::sqrt(7.0)) / 2) < 1e-10);
}

TEST_CASE("residuals stay small around the full circle") {
  for (double k : {1.0, std::sqrt(2.0), 2.5}) {
    for (int i = 0; i < 64; ++i) {
      SaddlePoint s = solve_dispersion(2 * pi * i / 64, k);
      CHECK(system_residual(s) <= 1e-12);
      CHECK(s.zeta > 0);
    }
  }
}

TEST_CASE("solution varies continuously in alpha") {
  for (double a : {0.3, 1.7, 3.9, 5.6}) {
    SaddlePoint s0 = solve_dispersion(a, 1.3);
    SaddlePoint s1 = solve_dispersion(a + 1e-6, 1.3);
    CHECK(std::fabs(s1.xi1 - s0.xi1) < 1e-4);
    CHECK(std::fabs(s1.xi2 - s0.xi2) < 1e-4);
    CHECK(std::fabs(s1.xi1 - s0.xi1) > 0);
  }
}

TEST_CASE("swap pairing: alpha <-> pi/2 - alpha exchanges the phases") {
  for (double a : {0.1, 0.4, 1.1}) {
    SaddlePoint s = solve_dispersion(a, 2.1);
    SaddlePoint t = solve_dispersion(pi / 2 - a, 2.1);
    CHECK(std::fabs(t.xi1 - s.xi2) < 1e-10);
    CHECK(std::fabs(t.xi2 - s.xi1) < 1e-10);
    CHECK(std::fabs(t.zeta - s.zeta) < 1e-10);
  }
}

TEST_CASE("warm start agrees with cold continuation") {
  SaddlePoint base = solve_dispersion(1.0, 1.9);
  SaddlePoint warm = solve_dispersion_from(base, 1.02, 1.9);
  SaddlePoint cold = solve_dispersion(1.02, 1.9);
  CHECK(std::fabs(warm.xi1 - cold.xi1) < 1e-11);
  CHECK(std::fabs(warm.xi2 - cold.xi2) < 1e-11);
}

TEST_CASE("complex continuation reduces to the real solution at eps=0") {
  SaddlePoint s = solve_dispersion(0.7, std::sqrt(2.0));
  ComplexSaddle c = continue_to_complex(s, Complex(2.0, 0.0));
  CHECK(std::abs(c.xi1 - s.xi1) < 1e-12);
  CHECK(std::abs(c.zeta - s.zeta) < 1e-12);

  ComplexSaddle cd = continue_to_complex(s, Complex(2.0, 1e-3));
  CHECK(std::abs(cd.xi1 - s.xi1) < 1e-3);
  CHECK(cd.xi1.imag() != 0.0);
}

TEST_CASE("boundary zeta has positive imaginary part on a hexagon") {
  Region h5 = hexagon_window(5);
  BoundaryEnumeration e = enumerate_boundary(h5);
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int j : e.sides[i]) {
      Complex z = zeta_boundary(e.points[i], j, std::sqrt(2.0));
      CHECK(z.imag() > 0);
    }
  // pinned value: side 1 at alpha = pi/4 is 1 - exp(-i pi/3)
  Complex z = zeta_boundary({3, 3}, 1, std::sqrt(2.0));
  CHECK(std::abs(z - (1.0 - std::exp(Complex(0, -pi / 3)))) < 1e-10);
}

TEST_CASE("wave number range is enforced") {
  REQUIRE_THROWS_AS(solve_dispersion(0.0, 3.0), ValidationError);
  REQUIRE_THROWS_AS(solve_dispersion(0.0, 0.0), ValidationError);
  REQUIRE_THROWS_AS(solve_dispersion(0.0, -1.0), ValidationError);
}
