#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "trihelm/config.hpp"

using namespace trihelm;

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

}  // namespace

TEST_CASE("reference config parses with defaults") {
  RunConfig c = parse_config(kHoleConfig);
  CHECK(c.problem_case == ProblemCase::CaseII);
  CHECK(c.k == 1.4142135623730951);
  CHECK(c.eps == 1e-6);
  CHECK(c.eta == 1.0);
  CHECK(c.n_max == 0);
  REQUIRE(c.interior.size() == 3);
  REQUIRE(c.boundary.size() == 10);
  CHECK(c.boundary.front() == Point{1, 2});
  CHECK(c.data_default == Complex(1.0, 0.0));
  CHECK(c.data_overrides.empty());
  CHECK(c.window == Window{});
  CHECK(c.out_field == "field.csv");
  CHECK(c.out_embedded == "field_embedded.csv");
  CHECK(c.out_report == "report.txt");
  CHECK(c.rays == default_rays());
  CHECK(c.r_min == 20.0);
  CHECK(c.r_max == 80.0);
}

TEST_CASE("emit/parse round trip is the identity") {
  RunConfig c = parse_config(kHoleConfig);
  std::string text = emit_config(c);
  RunConfig again = parse_config(text);
  CHECK(again == c);
  CHECK(emit_config(again) == text);  // canonical form is a fixed point

  // every field off its default survives the trip
  c.problem_case = ProblemCase::CaseI;
  c.interior.clear();
  c.boundary = {{0, 0}, {1, 0}, {4, 4}};
  c.k = 2.5;
  c.eps = 1e-4;
  c.n_max = 96;
  c.eta = -0.75;
  c.data_default = Complex(0.5, -1.25);
  c.data_overrides = {{Point{1, 0}, Complex(0.0, 2.0)}, {Point{4, 4}, Complex(3.0, 0.0)}};
  c.window = {-3, 9, -2, 7};
  c.out_field = "a.csv";
  c.out_embedded = "b.csv";
  c.out_report = "c.txt";
  c.rays = {{1, 0}, {0, 1}};
  c.r_min = 8.0;
  c.r_max = 31.0;
  CHECK(parse_config(emit_config(c)) == c);
}

TEST_CASE("value constraints raise validation errors") {
  auto mutated = [](auto&& fn) {
    RunConfig c = parse_config(kHoleConfig);
    fn(c);
    return emit_config(c);
  };
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.k = 3.0; })), ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.k = 0.0; })), ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.eps = -1e-6; })), ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.n_max = -1; })), ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.eta = 0.0; })), ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.boundary.clear(); })), ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.interior.clear(); })), ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.boundary.push_back({1, 2}); })),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.interior.push_back({1, 2}); })),
                  ValidationError);
  CHECK_THROWS_AS(
      parse_config(mutated([](RunConfig& c) { c.data_overrides = {{{9, 9}, Complex(1, 0)}}; })),
      ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.window = {5, 4, 0, 0}; })),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.rays = {{0, 0}}; })), ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) { c.rays.clear(); })), ValidationError);
  CHECK_THROWS_AS(parse_config(mutated([](RunConfig& c) {
                    c.r_min = 20.0;
                    c.r_max = 10.0;
                  })),
                  ValidationError);
}

TEST_CASE("structural problems raise parse errors") {
  CHECK_THROWS_AS(parse_config("{"), ParseError);
  CHECK_THROWS_AS(parse_config("[]"), ParseError);
  CHECK_THROWS_AS(parse_config(R"({"k": 1.0})"), ParseError);  // required keys missing
  CHECK_THROWS_AS(
      parse_config(R"({"case":"II","k":true,"complement":{"boundary":[[0,0]]}})"), ParseError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"case":"II","k":1.0,"complement":{"interior":[[0,0]],"boundary":[[1]]}})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_config(R"({"case":"II","k":1.0,"complement":{"boundary":[[0,0]]},"zz":1})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_config(
          R"({"case":"II","k":1.0,"complement":{"interior":[[0,0]],"boundary":[[1,0]]},"boundary_data":"x"})"),
      ParseError);
  // a bad case tag is a value problem, not a structural one
  CHECK_THROWS_AS(
      parse_config(R"({"case":"III","k":1.0,"complement":{"boundary":[[0,0]]}})"),
      ValidationError);
}

TEST_CASE("region checks run at parse time") {
  // an annular complement encloses lattice points and defeats every cone
  RunConfig c = parse_config(kHoleConfig);
  c.interior.clear();
  c.boundary.clear();
  PointSet ring, rim;
  for (std::int64_t a = -3; a <= 3; ++a)
    for (std::int64_t b = -3; b <= 3; ++b)
      if (hexdist({a, b}) == 2) ring.insert({a, b});
  for (Point p : ring)
    for (Point q : neighborhood(p))
      if (!ring.count(q)) rim.insert(q);
  c.interior.assign(ring.begin(), ring.end());
  c.boundary.assign(rim.begin(), rim.end());
  CHECK_THROWS_AS(parse_config(emit_config(c)), ValidationError);
}

TEST_CASE("problem translation places overrides by enumeration order") {
  RunConfig c = parse_config(kHoleConfig);
  c.data_overrides = {{Point{2, 1}, Complex(0.0, 3.0)}};
  ProblemSpec spec = to_problem_spec(c);
  CHECK(problem_case(spec) == ProblemCase::CaseII);
  CHECK(spec.k == c.k);
  CHECK(spec.eps == c.eps);
  CHECK(spec.eta == c.eta);
  CHECK(spec.window == c.window);
  BoundaryEnumeration b = enumerate_boundary(spec.scatterer);
  REQUIRE(spec.f.size() == b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.points[i] == Point{2, 1})
      CHECK(spec.f[i] == Complex(0.0, 3.0));
    else
      CHECK(spec.f[i] == Complex(1.0, 0.0));
  }
}
