#pragma once

#include <array>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "stdg/assembly.hpp"
#include "stdg/solver.hpp"

namespace stdg {

// Validated run configuration; see README for the JSON schema. All
// validation happens before any compute, with ConfigError messages carrying
// the offending field path.
struct RunConfig {
  std::string problem_name = "example1";

  struct CustomProblem {
    // Expressions in (x, y, t): diffusion entries (a_xx, a_xy, a_yy).
    std::array<std::string, 3> a{"1", "0", "1"};
    double theta = 1.0;
    std::string f = "0";
    std::string g_D = "0";
    std::string u0 = "0";
    std::string exact;  // optional reference solution
  };
  std::optional<CustomProblem> custom;

  std::string mesh_kind = "rect";  // rect | file
  int nx = 4, ny = 4;
  Rect domain;
  std::string mesh_path;
  double cs_warn_threshold = 50.0;

  std::string time_kind = "uniform";  // uniform | geometric
  double T = 1.0;
  int N = 4;
  double sigma = 0.5;

  std::string basis_kind = "P";  // P | PQ | Q
  int p = 1;
  std::optional<std::vector<int>> degree_per_slab;
  std::optional<std::map<int, int>> degree_per_element;

  double C_sigma = 10.0;
  int quad_order_offset = 2;
  int data_order_offset = 0;

  double solver_tol = 1e-12;
  int direct_threshold = 200000;
  int max_iters = 2000;

  int infsup_cap = 5000;
  int threads = 0;

  std::string out_dir = "out";
  std::string prefix = "run";

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);
  nlohmann::json to_json() const;

  SpatialMesh make_mesh() const;
  TimeGrid make_grid() const;
  BasisSpec make_basis_spec() const;
  ProblemData make_data() const;
  AssemblyOptions assembly_options() const;
  MarchOptions march_options() const;
};

IndexSetKind parse_index_set_kind(const std::string& name);

}  // namespace stdg
