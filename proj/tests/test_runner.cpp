#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "stdg/runner.hpp"

using namespace stdg;

namespace {
std::string tmp_out() {
  auto dir = std::filesystem::temp_directory_path() / "stdg_runner_test";
  std::filesystem::create_directories(dir);
  return dir.string();
}
}  // namespace

TEST_CASE("example2 degree rule rounding") {
  CHECK(example2_degrees(4, 1.5, DegreeRound::Ceil) == std::vector<int>{2, 3, 5, 6});
  CHECK(example2_degrees(4, 1.5, DegreeRound::Floor) == std::vector<int>{1, 3, 4, 6});
  CHECK(example2_degrees(2, 0.4, DegreeRound::Floor) == std::vector<int>{1, 1});  // clamped
  CHECK(example2_degrees(3, 1.0, DegreeRound::Nearest) == std::vector<int>{1, 2, 3});
}

TEST_CASE("example1 runner determinism, including across thread counts") {
  RunnerOptions opts;
  opts.out_dir = tmp_out();
  opts.prefix = "det_a";
  opts.threads = 1;
  Example1Result a = run_example1(2, 1, "rect", opts);
  opts.prefix = "det_b";
  Example1Result b = run_example1(2, 1, "rect", opts);
  opts.prefix = "det_c";
  opts.threads = 4;
  Example1Result c = run_example1(2, 1, "rect", opts);
  CHECK(a.table.to_csv() == b.table.to_csv());
  CHECK(a.table.to_csv() == c.table.to_csv());

  std::ifstream fa(a.csv_path), fc(c.csv_path);
  std::string ta((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  std::string tc((std::istreambuf_iterator<char>(fc)), std::istreambuf_iterator<char>());
  CHECK(ta == tc);  // bit-identical CSV files
}

TEST_CASE("manifest carries config echo, version and timings") {
  RunnerOptions opts;
  opts.out_dir = tmp_out();
  opts.prefix = "manifest_check";
  Example1Result res = run_example1(2, 1, "rect", opts);
  std::ifstream in(res.manifest_path);
  REQUIRE(in.good());
  nlohmann::json m;
  in >> m;
  CHECK(m.contains("version"));
  CHECK(m.contains("config"));
  CHECK(m.contains("timings_seconds"));
  CHECK(m["config"]["experiment"] == "example1");
}

TEST_CASE("run_custom produces an error report for registry problems") {
  RunConfig config;
  config.problem_name = "heat_decay";
  config.nx = config.ny = 4;
  config.T = 0.1;
  config.N = 5;
  config.p = 2;
  config.out_dir = tmp_out();
  config.prefix = "heat_small";
  CustomResult res = run_custom(config);
  CHECK(res.has_error_report);
  CHECK(res.report.e_L2L2 > 0.0);
  CHECK(res.report.e_L2L2 < 1e-2);  // smooth problem, p=2, coarse mesh
  CHECK(std::filesystem::exists(res.csv_path));
  CHECK(std::filesystem::exists(res.manifest_path));
}

TEST_CASE("run_custom dumps coefficients without a reference solution") {
  RunConfig config = RunConfig::from_json(nlohmann::json{
      {"problem",
       {{"name", "custom"},
        {"custom", {{"f", "1"}, {"g_D", "0"}, {"u0", "0"}}}}},
      {"mesh", {{"kind", "rect"}, {"nx", 2}, {"ny", 2}}},
      {"time", {{"kind", "uniform"}, {"T", 0.2}, {"N", 2}}},
      {"basis", {{"kind", "P"}, {"p", 1}}}});
  config.out_dir = tmp_out();
  config.prefix = "dump_run";
  CustomResult res = run_custom(config);
  CHECK(!res.has_error_report);
  REQUIRE(std::filesystem::exists(res.solution_path));
  std::ifstream in(res.solution_path);
  nlohmann::json dump;
  in >> dump;
  CHECK(dump["dofs"] == 2 * 4 * 4);
  CHECK(dump["slabs"].size() == 2);
}

TEST_CASE("PQ uses fewer dofs than Q at comparable accuracy") {
  RunConfig base;
  base.problem_name = "example1";
  base.nx = base.ny = 4;
  base.T = 0.1;
  base.N = 4;
  base.p = 1;
  base.out_dir = tmp_out();

  base.basis_kind = "PQ";
  base.prefix = "cmp_pq";
  CustomResult pq = run_custom(base);
  base.basis_kind = "Q";
  base.prefix = "cmp_q";
  CustomResult q = run_custom(base);
  CHECK(pq.report.dofs < q.report.dofs);
  CHECK(pq.report.e_L2L2 < 2.0 * q.report.e_L2L2);
  CHECK(q.report.e_L2L2 < 2.0 * pq.report.e_L2L2);
}

TEST_CASE("halving the time step reduces the Example-1 error at fixed h") {
  RunConfig config;
  config.problem_name = "example1";
  config.nx = config.ny = 4;
  config.T = 1.0;
  config.p = 1;
  config.out_dir = tmp_out();
  config.N = 10;
  config.prefix = "tref_a";
  CustomResult coarse = run_custom(config);
  config.N = 20;
  config.prefix = "tref_b";
  CustomResult fine = run_custom(config);
  CHECK(fine.report.e_L2L2 < coarse.report.e_L2L2);
}

TEST_CASE("sigma = 0.1 beats sigma = 0.5 per dof on the initial-layer problem") {
  RunnerOptions opts;
  opts.out_dir = tmp_out();
  opts.prefix = "sig01";
  Example2Result tight = run_example2(3, 0.1, 1.5, 16, DegreeRound::Ceil, opts);
  opts.prefix = "sig05";
  Example2Result loose = run_example2(3, 0.5, 1.5, 16, DegreeRound::Ceil, opts);
  // Same N means the same dof count; the strongly graded mesh is more accurate.
  for (std::size_t k = 0; k < tight.rows.size(); ++k) {
    CHECK(tight.rows[k].dofs == loose.rows[k].dofs);
    CHECK(tight.rows[k].e_L2L2 > 0.0);
  }
  CHECK(tight.rows.back().e_L2L2 < loose.rows.back().e_L2L2);
  CHECK(tight.rows.back().e_L2L2 < tight.rows.front().e_L2L2);
  CHECK(loose.rows.back().e_L2L2 < loose.rows.front().e_L2L2);
}
