#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stdg/analysis.hpp"
#include "stdg/errors.hpp"
#include "stdg/runner.hpp"

using namespace stdg;

int main(int argc, char** argv) {
  CLI::App app{"space-time dG solver for parabolic problems on prismatic meshes"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "single solve from a config file");
  run_cmd->add_option("--config", config_path, "config file (JSON)")->required();

  int levels = 3, p = 1;
  std::string mesh_kind = "rect", basis_kind = "P";
  RunnerOptions ropts;
  auto* ex1 = app.add_subcommand("example1", "h-refinement study (oscillating Gaussian)");
  ex1->add_option("--levels", levels, "number of refinement levels")->default_val(3);
  ex1->add_option("--p", p, "polynomial degree")->default_val(1);
  ex1->add_option("--mesh", mesh_kind, "rect|poly")->default_val("rect");
  ex1->add_option("--basis", basis_kind, "index set: P|PQ|Q")->default_val("P");
  ex1->add_option("--out", ropts.out_dir, "output directory")->default_val("out");
  ex1->add_option("--mesh-dir", ropts.mesh_dir, "polygonal fixture directory")
      ->default_val("data/meshes");
  ex1->add_option("--csigma", ropts.C_sigma, "penalty constant")->default_val(10.0);
  ex1->add_option("--threads", ropts.threads, "assembly threads (0 = STDG_THREADS)")
      ->default_val(0);

  int N = 6, elements = 256;
  double sigma = 0.1, mu = 1.5;
  std::string round_name = "ceil";
  auto* ex2 = app.add_subcommand("example2", "hp study (t^alpha initial layer)");
  ex2->add_option("--N", N, "max number of graded slabs")->default_val(6);
  ex2->add_option("--sigma", sigma, "grading factor in (0,1)")->default_val(0.1);
  ex2->add_option("--mu", mu, "degree slope (p_n = round(mu*n))")->default_val(1.5);
  ex2->add_option("--elements", elements, "spatial elements (perfect square)")
      ->default_val(256);
  ex2->add_option("--degree-round", round_name, "ceil|floor|nearest")->default_val("ceil");
  ex2->add_option("--out", ropts.out_dir, "output directory")->default_val("out");
  ex2->add_option("--csigma", ropts.C_sigma, "penalty constant")->default_val(10.0);
  ex2->add_option("--threads", ropts.threads, "assembly threads")->default_val(0);

  auto* diag = app.add_subcommand("diag", "diagnostics");
  std::string diag_config;
  auto* infsup = diag->add_subcommand("infsup", "dense inf-sup estimate (small instances)");
  infsup->add_option("--config", diag_config, "config file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      RunConfig config = RunConfig::from_file(config_path);
      CustomResult res = run_custom(config);
      if (res.has_error_report) {
        std::printf("e_L2L2   = %.6e\ne_L2H1   = %.6e\ne_LinfL2 = %.6e\ndg_norm  = %.6e\n",
                    res.report.e_L2L2, res.report.e_L2H1, res.report.e_LinfL2,
                    res.report.dg_norm_of_error);
        std::printf("wrote %s\n", res.csv_path.c_str());
      } else {
        std::printf("wrote %s\n", res.solution_path.c_str());
      }
      std::printf("wrote %s\n", res.manifest_path.c_str());
    } else if (*ex1) {
      Example1Result res =
          run_example1(levels, p, mesh_kind, ropts, parse_index_set_kind(basis_kind));
      std::fputs(res.table.to_csv().c_str(), stdout);
      std::printf("wrote %s\n", res.csv_path.c_str());
    } else if (*ex2) {
      DegreeRound round = round_name == "floor"
                              ? DegreeRound::Floor
                              : (round_name == "nearest" ? DegreeRound::Nearest
                                                         : DegreeRound::Ceil);
      if (round_name != "ceil" && round_name != "floor" && round_name != "nearest")
        throw ConfigError("--degree-round: must be ceil, floor or nearest");
      Example2Result res = run_example2(N, sigma, mu, elements, round, ropts);
      std::fputs(res.to_csv().c_str(), stdout);
      std::printf("wrote %s\n", res.csv_path.c_str());
    } else if (*infsup) {
      RunConfig config = RunConfig::from_file(diag_config);
      InfSupOptions iopts;
      iopts.cap = config.infsup_cap;
      iopts.assembly = config.assembly_options();
      double value = infsup_estimate(config.make_mesh(), config.make_grid(),
                                     config.make_basis_spec(), config.make_data(), iopts);
      std::printf("infsup = %.12e\n", value);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
