#pragma once

#include <string>
#include <vector>

#include "stdg/analysis.hpp"
#include "stdg/config.hpp"

namespace stdg {

enum class DegreeRound { Ceil, Floor, Nearest };

struct RunnerOptions {
  std::string out_dir = "out";
  std::string prefix;       // default derived from the experiment
  std::string mesh_dir = "data/meshes";  // polygonal fixture directory
  double C_sigma = 10.0;
  int quad_order_offset = 2;
  int data_order_offset = 0;
  // Relative residual for the slab solves. Zero picks the per-experiment
  // default: 1e-12, except 1e-10 for the hp study whose mixed degree/step
  // scales sit at the limiting accuracy of double precision.
  double solver_tol = 0.0;
  int threads = 0;
  bool write_files = true;  // CSV + manifest
  double cs_warn_threshold = 50.0;  // warn when the measured C_s exceeds this
};

// Prints a warning to stderr when the measured shape constant exceeds the
// threshold; the run itself proceeds.
void warn_shape_constant(const SpatialMesh& mesh, double threshold);

struct Example1Result {
  ConvergenceTable table;
  std::string csv_path;
  std::string manifest_path;
};

// Refinement study on the oscillating-Gaussian problem: level l uses
// 16*4^l spatial elements with 40*2^l uniform steps on J=(0,1).
// mesh_kind: "rect" (structured) or "poly" (checked-in fixture meshes).
Example1Result run_example1(int levels, int p, const std::string& mesh_kind,
                            const RunnerOptions& opts = {},
                            IndexSetKind kind = IndexSetKind::TotalDegree);

struct Example2Row {
  int N = 0;
  long dofs = 0;
  double e_L2L2 = 0.0;
  double e_L2H1 = 0.0;
  double e_LinfL2 = 0.0;
  double dg_norm = 0.0;
  double e_L2H1_full = 0.0;
};

struct Example2Result {
  std::vector<Example2Row> rows;
  double sigma = 0.0;
  double mu = 0.0;
  std::string csv_path;
  std::string manifest_path;
  std::string to_csv() const;
};

// hp study on the t^alpha initial-layer problem: for N = 1..N_max,
// geometric grading t_n = sigma^(N-n)*T with per-slab degree round(mu*n).
Example2Result run_example2(int N_max, double sigma, double mu, int elements = 256,
                            DegreeRound round = DegreeRound::Ceil,
                            const RunnerOptions& opts = {});

struct CustomResult {
  bool has_error_report = false;
  ErrorReport report;
  std::string csv_path;       // when a reference solution is available
  std::string solution_path;  // coefficient dump otherwise
  std::string manifest_path;
};

// Single solve from a config; produces an error report when a reference
// solution is available, otherwise dumps the solution coefficients.
CustomResult run_custom(const RunConfig& config);

// Per-slab degrees for the hp study (slab index n = 1..N counted from t=0).
std::vector<int> example2_degrees(int N, double mu, DegreeRound round);

}  // namespace stdg
