#include <doctest.h>

#include <nlohmann/json.hpp>

#include "stdg/config.hpp"
#include "stdg/errors.hpp"

using namespace stdg;
using nlohmann::json;

TEST_CASE("config defaults and echo round-trip") {
  RunConfig c = RunConfig::from_json(json::object());
  CHECK(c.problem_name == "example1");
  CHECK(c.C_sigma == 10.0);
  CHECK(c.p == 1);
  RunConfig back = RunConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
}

TEST_CASE("config validation reports field paths") {
  auto expect_error = [](const json& j, const std::string& needle) {
    try {
      RunConfig::from_json(j);
      FAIL_CHECK("expected ConfigError for ", needle);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_error({{"mesh", {{"kind", "rect"}, {"nx", 0}}}}, "mesh.nx");
  expect_error({{"mesh", {{"kind", "file"}}}}, "mesh.path");
  expect_error({{"mesh", {{"kind", "file"}, {"path", "/nonexistent/mesh.json"}}}},
               "mesh.path");
  expect_error({{"time", {{"N", 0}}}}, "time.N");
  expect_error({{"time", {{"kind", "geometric"}, {"sigma", 1.5}}}}, "time.sigma");
  expect_error({{"basis", {{"p", 0}}}}, "basis.p");
  expect_error({{"basis", {{"kind", "Z"}}}}, "basis.kind");
  expect_error({{"penalty", {{"C_sigma", -1.0}}}}, "penalty.C_sigma");
  expect_error({{"solver", {{"tol", 0.0}}}}, "solver.tol");
  expect_error({{"problem", {{"name", "nope"}}}}, "problem.name");
}

TEST_CASE("custom problem expressions") {
  json j = {{"problem",
             {{"name", "custom"},
              {"custom",
               {{"a", "1"},
                {"theta", 1.0},
                {"f", "0"},
                {"g_D", "1"},
                {"u0", "1"},
                {"exact", "1"}}}}}};
  RunConfig c = RunConfig::from_json(j);
  ProblemData data = c.make_data();
  CHECK(data.a(0.0, 0.5, 0.5)(0, 0) == 1.0);
  CHECK(data.a(0.0, 0.5, 0.5)(0, 1) == 0.0);
  CHECK(data.exact.has_value());
  CHECK(data.exact->value(0.3, 0.5, 0.5) == 1.0);
  CHECK(data.exact->gradient(0.3, 0.5, 0.5).norm() == 0.0);

  json bad = j;
  bad["problem"]["custom"]["f"] = "sin(";
  CHECK_THROWS_AS(RunConfig::from_json(bad), ConfigError);
}

TEST_CASE("config materialization") {
  json j = {{"mesh", {{"kind", "rect"}, {"nx", 3}, {"ny", 2}}},
            {"time", {{"kind", "geometric"}, {"T", 0.1}, {"N", 3}, {"sigma", 0.5}}},
            {"basis", {{"kind", "PQ"}, {"p", 2}}}};
  RunConfig c = RunConfig::from_json(j);
  SpatialMesh mesh = c.make_mesh();
  CHECK(mesh.elements.size() == 6);
  TimeGrid grid = c.make_grid();
  CHECK(grid.num_slabs() == 3);
  CHECK(grid.slabs[0].t_end == doctest::Approx(0.025));
  BasisSpec spec = c.make_basis_spec();
  CHECK(spec.kind == IndexSetKind::TimeTensorTotalSpace);
  CHECK(spec.degrees.degree(0, 0) == 2);
}
