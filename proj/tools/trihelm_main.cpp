#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <string>

#include "trihelm/config.hpp"
#include "trihelm/green.hpp"
#include "trihelm/io.hpp"
#include "trihelm/run.hpp"
#include "trihelm/selftest.hpp"

using namespace trihelm;

namespace {

int do_solve(const std::string& config_path, const std::string& out_dir) {
  RunConfig cfg = parse_config(read_text_file(config_path));
  RunResult r = run(cfg, out_dir);
  std::cout << "boundary points: " << r.system.boundary.size() << "\n";
  std::cout << "condition estimate: " << r.residuals.condition << "\n";
  std::cout << "boundary residual max: " << r.residuals.boundary_max << "\n";
  std::cout << "interior residual max: " << r.residuals.interior_max << "\n";
  if (r.radiation) {
    std::cout << "decay exponents:";
    for (const auto& ray : r.radiation->rays) std::cout << ' ' << ray.decay_exponent;
    std::cout << "\n";
  } else {
    std::cout << "radiation diagnostics skipped: " << r.radiation_note << "\n";
  }
  std::cout << "wrote " << r.field_path.string() << ", " << r.embedded_path.string() << ", "
            << r.report_path.string() << "\n";
  if (!r.within_tolerance) {
    std::cout << "residual thresholds exceeded\n";
    return 1;
  }
  return 0;
}

int do_green(double k, std::int64_t x1, std::int64_t x2, double eps, int nmax) {
  Point x{x1, x2};
  EngineOptions opt;
  opt.eps = eps;
  opt.n_request = static_cast<int>(hexdist(x)) + 2;
  opt.n_max = nmax;
  GreenEngine g(k, opt);
  Complex v = g.green(x);
  Complex acc = -(6.0 - g.ksq()) * v;
  for (Point d : kDirections) acc += g.green(x + d);
  if (x1 == 0 && x2 == 0) acc -= 1.0;
  std::cout << "G(" << x1 << "," << x2 << ") = " << v.real() << " " << std::showpos << v.imag()
            << "i" << std::noshowpos << "\n";
  std::cout << "|G| = " << std::abs(v) << "\n";
  std::cout << "stencil residual = " << std::abs(acc) << "\n";
  return 0;
}

int do_dispersion(double alpha, double k) {
  SaddlePoint s = solve_dispersion(alpha, k);
  std::cout << "xi1 = " << s.xi1 << "\n";
  std::cout << "xi2 = " << s.xi2 << "\n";
  std::cout << "zeta = " << s.zeta << "\n";
  std::cout << "mu = " << s.mu() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete Helmholtz scattering on the triangular lattice"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  CLI::App* solve = app.add_subcommand("solve", "solve a scattering problem from a JSON config");
  solve->add_option("--config", config_path, "JSON problem description")->required();
  solve->add_option("--out-dir", out_dir, "directory for the output files");

  double k = 0, eps = 1e-6, alpha = 0;
  std::int64_t x1 = 0, x2 = 0;
  int nmax = 0;
  CLI::App* green = app.add_subcommand("green", "evaluate the lattice Green's function");
  green->add_option("--k", k, "wave number in (0, 2*sqrt(2))")->required();
  green->add_option("--x1", x1, "first lattice coordinate")->required();
  green->add_option("--x2", x2, "second lattice coordinate")->required();
  green->add_option("--eps", eps, "damping (default 1e-6)");
  green->add_option("--nmax", nmax, "truncation override (default automatic)");

  CLI::App* disp = app.add_subcommand("dispersion", "solve the direction/phase system");
  disp->add_option("--alpha", alpha, "direction angle in radians")->required();
  disp->add_option("--k", k, "wave number in (0, 2*sqrt(2))")->required();

  CLI::App* self = app.add_subcommand("selftest", "run the built-in verification checks");

  CLI11_PARSE(app, argc, argv);

  std::cout << std::setprecision(15);
  try {
    if (solve->parsed()) return do_solve(config_path, out_dir);
    if (green->parsed()) return do_green(k, x1, x2, eps, nmax);
    if (disp->parsed()) return do_dispersion(alpha, k);
    if (self->parsed()) return run_selftest(std::cout) == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
