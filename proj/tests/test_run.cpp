#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "trihelm/config.hpp"
#include "trihelm/io.hpp"
#include "trihelm/run.hpp"

using namespace trihelm;
namespace fs = std::filesystem;

namespace {

const char* kHoleConfig = R"json({
  "case": "II",
  "k": 1.4142135623730951,
  "complement": {
    "interior": [[2,2],[3,2],[3,3]],
    "boundary": [[1,2],[1,3],[2,1],[2,3],[2,4],[3,1],[3,4],[4,1],[4,2],[4,3]]
  },
  "boundary_data": 1
})json";

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

std::vector<double> split_fields(const std::string& line) {
  std::vector<double> out;
  std::istringstream is(line);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

TEST_CASE("solve pipeline: deterministic files, row contracts, diagnostics") {
  RunConfig cfg = parse_config(kHoleConfig);
  fs::path dir = fs::temp_directory_path() / "trihelm_run_test";
  fs::remove_all(dir);
  RunResult r1 = run(cfg, dir / "a");
  RunResult r2 = run(cfg, dir / "b");

  // byte-identical repeat runs
  std::string field = read_text_file(r1.field_path);
  std::string embedded = read_text_file(r1.embedded_path);
  std::string report = read_text_file(r1.report_path);
  CHECK(field == read_text_file(r2.field_path));
  CHECK(embedded == read_text_file(r2.embedded_path));
  CHECK(report == read_text_file(r2.report_path));

  // one row per window point outside the hole, lexicographic, holes dropped
  auto rows = split_lines(field);
  REQUIRE(rows.size() == 1 + 36 * 36 - 3);
  CHECK(rows[0] == "x1,x2,re,im,abs");
  CHECK(rows[1].rfind("-15,-15,", 0) == 0);
  for (const std::string& row : rows) {
    CHECK(row.rfind("2,2,", 0) != 0);
    CHECK(row.rfind("3,2,", 0) != 0);
    CHECK(row.rfind("3,3,", 0) != 0);
  }

  // embedded table carries the plane images of the same rows
  auto erows = split_lines(embedded);
  REQUIRE(erows.size() == rows.size());
  CHECK(erows[0] == "ex,ey,re,im,abs");
  std::vector<double> first = split_fields(erows[1]);
  REQUIRE(first.size() == 5);
  EmbeddedPoint e0 = embed({-15, -15});
  CHECK(first[0] == Catch::Approx(e0.ex).epsilon(1e-12));
  CHECK(first[1] == Catch::Approx(e0.ey).epsilon(1e-12));
  std::vector<double> grid_row = split_fields(rows[1]);
  CHECK(first[2] == grid_row[2]);  // same value columns
  CHECK(first[3] == grid_row[3]);

  // residual gates hold and are flagged
  CHECK(r1.within_tolerance);
  CHECK(r1.residuals.boundary_checked == 10);
  CHECK(r1.residuals.boundary_max <= 2e-10);
  CHECK(r1.residuals.interior_max <= 1e-9);
  CHECK(std::isfinite(r1.residuals.condition));

  // grid exposes holes as missing values
  CHECK_FALSE(r1.grid.at({2, 2}).has_value());
  CHECK_FALSE(r1.grid.at({3, 3}).has_value());
  CHECK(r1.grid.at({5, 5}).has_value());
  CHECK(r1.grid.hole_count == 3);

  // radiation diagnostics ran and look like an outgoing wave
  REQUIRE(r1.radiation.has_value());
  REQUIRE(r1.radiation->rays.size() == 5);
  CHECK(r1.radiation->worst_exponent_deviation() < 0.05);
  CHECK(r1.radiation->phase_trends_ok(2));

  // the emitted row x2 = 2 is not mirror-symmetric about the window centre
  double asym = 0;
  for (std::int64_t a = cfg.window.x1_min; a <= cfg.window.x1_max; ++a) {
    std::int64_t am = 5 - a;
    if (am < cfg.window.x1_min || am > cfg.window.x1_max) continue;
    auto up = r1.grid.at({a, 2});
    auto uq = r1.grid.at({am, 2});
    if (!up || !uq) continue;
    asym = std::max(asym, std::abs(up->real() - uq->real()));
  }
  CHECK(asym > 1e-8);

  // report names the headline quantities
  CHECK(report.find("condition estimate:") != std::string::npos);
  CHECK(report.find("within tolerance: yes") != std::string::npos);
  CHECK(report.find("decay exponent") != std::string::npos);

  fs::remove_all(dir);
}
