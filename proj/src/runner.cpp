#include "stdg/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "stdg/errors.hpp"
#include "stdg/problem.hpp"

#ifndef STDG_VERSION
#define STDG_VERSION "unknown"
#endif

namespace stdg {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_text(const std::string& path, const std::string& text) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string write_manifest(const std::string& path, const json& config_echo,
                           const json& timings, const json& extra = json::object()) {
  json m;
  m["tool"] = "stdg";
  m["version"] = STDG_VERSION;
  m["config"] = config_echo;
  m["timings_seconds"] = timings;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  write_text(path, m.dump(2) + "\n");
  return path;
}

MarchOptions march_options(const RunnerOptions& opts, double default_tol) {
  MarchOptions m;
  m.assembly.C_sigma = opts.C_sigma;
  m.assembly.quad_order_offset = opts.quad_order_offset;
  m.assembly.data_order_offset = opts.data_order_offset;
  m.assembly.threads = opts.threads;
  m.solver.tol = opts.solver_tol > 0.0 ? opts.solver_tol : default_tol;
  return m;
}

}  // namespace

void warn_shape_constant(const SpatialMesh& mesh, double threshold) {
  double cs = shape_regularity_report(mesh).global;
  if (cs > threshold)
    std::fprintf(stderr, "warning: measured shape constant C_s = %.2f exceeds %.2f\n", cs,
                 threshold);
}

Example1Result run_example1(int levels, int p, const std::string& mesh_kind,
                            const RunnerOptions& opts, IndexSetKind kind) {
  if (levels < 2) throw ConfigError("example1: levels must be >= 2");
  if (p < 1) throw ConfigError("example1: p must be >= 1");
  if (mesh_kind != "rect" && mesh_kind != "poly")
    throw ConfigError("example1: mesh kind must be 'rect' or 'poly'");

  ProblemData data = make_example1();
  MarchOptions mopts = march_options(opts, 1e-12);
  std::vector<ConvergenceRow> rows;
  json timings = json::array();

  for (int level = 0; level < levels; ++level) {
    auto t0 = Clock::now();
    int elements = 16 << (2 * level);  // 16, 64, 256, ...
    int steps = 40 << level;           // 40, 80, 160, ...
    SpatialMesh mesh;
    if (mesh_kind == "rect") {
      int n = 4 << level;
      mesh = build_rectangular_mesh(n, n);
    } else {
      std::string path = opts.mesh_dir + "/poly_" + std::to_string(elements) + ".json";
      mesh = load_mesh(path);
    }
    warn_shape_constant(mesh, opts.cs_warn_threshold);
    TimeGrid grid = uniform_partition(1.0, steps);
    BasisSpec spec;
    spec.kind = kind;
    spec.degrees.uniform_p = p;
    DiscreteSolution sol = march(mesh, grid, spec, data, mopts);
    ErrorReport rep = error_norms(sol, *data.exact, data, mopts.assembly);
    rows.push_back(make_row(level, rep));
    timings.push_back({{"level", level}, {"seconds", seconds_since(t0)}});
  }

  Example1Result res;
  res.table = eoc(rows);

  if (opts.write_files) {
    std::string prefix =
        opts.prefix.empty() ? ("example1_" + mesh_kind + "_p" + std::to_string(p))
                            : opts.prefix;
    res.csv_path = opts.out_dir + "/" + prefix + ".csv";
    write_text(res.csv_path, res.table.to_csv());
    json echo = {{"experiment", "example1"}, {"levels", levels},      {"p", p},
                 {"mesh", mesh_kind},        {"C_sigma", opts.C_sigma},
                 {"quad_order_offset", opts.quad_order_offset}};
    res.manifest_path =
        write_manifest(opts.out_dir + "/" + prefix + "_manifest.json", echo, timings);
  }
  return res;
}

std::vector<int> example2_degrees(int N, double mu, DegreeRound round) {
  std::vector<int> deg(N);
  for (int n = 1; n <= N; ++n) {
    double v = mu * n;
    int p = 0;
    switch (round) {
      case DegreeRound::Ceil:
        p = int(std::ceil(v - 1e-12));
        break;
      case DegreeRound::Floor:
        p = int(std::floor(v + 1e-12));
        break;
      case DegreeRound::Nearest:
        p = int(std::lround(v));
        break;
    }
    deg[n - 1] = std::max(1, p);
  }
  return deg;
}

std::string Example2Result::to_csv() const {
  std::string out = "N,sigma,mu,dofs,e_L2L2,e_L2H1,e_LinfL2,dg_norm,e_L2H1_full\n";
  char buf[512];
  for (const Example2Row& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%ld,%.12e,%.12e,%.12e,%.12e,%.12e\n", r.N,
                  sigma, mu, r.dofs, r.e_L2L2, r.e_L2H1, r.e_LinfL2, r.dg_norm,
                  r.e_L2H1_full);
    out += buf;
  }
  return out;
}

Example2Result run_example2(int N_max, double sigma, double mu, int elements,
                            DegreeRound round, const RunnerOptions& opts) {
  if (N_max < 1) throw ConfigError("example2: N must be >= 1");
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("example2: sigma must be in (0,1)");
  if (!(mu > 0.0)) throw ConfigError("example2: mu must be > 0");
  int nx = int(std::lround(std::sqrt(double(elements))));
  if (nx * nx != elements)
    throw ConfigError("example2: elements must be a perfect square (rectangular mesh)");

  const double T = 0.1;
  ProblemData data = make_example2();
  MarchOptions mopts = march_options(opts, 1e-10);
  SpatialMesh mesh = build_rectangular_mesh(nx, nx);
  warn_shape_constant(mesh, opts.cs_warn_threshold);

  Example2Result res;
  res.sigma = sigma;
  res.mu = mu;
  json timings = json::array();

  for (int N = 1; N <= N_max; ++N) {
    auto t0 = Clock::now();
    TimeGrid grid = (N == 1) ? uniform_partition(T, 1) : geometric_partition(T, N, sigma);
    BasisSpec spec;
    spec.kind = IndexSetKind::TotalDegree;
    spec.degrees.per_slab = example2_degrees(N, mu, round);
    DiscreteSolution sol = march(mesh, grid, spec, data, mopts);
    ErrorReport rep = error_norms(sol, *data.exact, data, mopts.assembly);
    Example2Row row;
    row.N = N;
    row.dofs = rep.dofs;
    row.e_L2L2 = rep.e_L2L2;
    row.e_L2H1 = rep.e_L2H1;
    row.e_LinfL2 = rep.e_LinfL2;
    row.dg_norm = rep.dg_norm_of_error;
    row.e_L2H1_full = rep.e_L2H1_full;
    res.rows.push_back(row);
    timings.push_back({{"N", N}, {"seconds", seconds_since(t0)}});
  }

  if (opts.write_files) {
    char sig[32];
    std::snprintf(sig, sizeof(sig), "%g", sigma);
    std::string prefix =
        opts.prefix.empty() ? ("example2_sigma" + std::string(sig)) : opts.prefix;
    res.csv_path = opts.out_dir + "/" + prefix + ".csv";
    write_text(res.csv_path, res.to_csv());
    json echo = {{"experiment", "example2"}, {"N_max", N_max},   {"sigma", sigma},
                 {"mu", mu},                 {"elements", elements},
                 {"C_sigma", opts.C_sigma},  {"solver_tol", mopts.solver.tol}};
    res.manifest_path =
        write_manifest(opts.out_dir + "/" + prefix + "_manifest.json", echo, timings);
  }
  return res;
}

CustomResult run_custom(const RunConfig& config) {
  auto t0 = Clock::now();
  SpatialMesh mesh = config.make_mesh();
  warn_shape_constant(mesh, config.cs_warn_threshold);
  TimeGrid grid = config.make_grid();
  BasisSpec spec = config.make_basis_spec();
  ProblemData data = config.make_data();
  MarchOptions mopts = config.march_options();

  DiscreteSolution sol = march(mesh, grid, spec, data, mopts);
  double solve_seconds = seconds_since(t0);

  CustomResult res;
  std::string base = config.out_dir + "/" + config.prefix;
  json timings = {{"solve_seconds", solve_seconds}};

  if (data.exact) {
    res.has_error_report = true;
    res.report = error_norms(sol, *data.exact, data, mopts.assembly);
    ConvergenceTable table{{make_row(0, res.report)}};
    res.csv_path = base + ".csv";
    write_text(res.csv_path, table.to_csv());
    timings["total_seconds"] = seconds_since(t0);
  } else {
    json dump;
    dump["dofs"] = sol.total_dofs();
    dump["slabs"] = json::array();
    for (int n = 0; n < grid.num_slabs(); ++n) {
      const SlabSolution& s = sol.slabs[n];
      json slab;
      slab["index"] = n;
      slab["t_start"] = grid.slabs[n].t_start;
      slab["t_end"] = grid.slabs[n].t_end;
      slab["coefficients"] = std::vector<double>(
          s.coeffs.data(), s.coeffs.data() + s.coeffs.size());
      dump["slabs"].push_back(std::move(slab));
    }
    res.solution_path = base + "_solution.json";
    write_text(res.solution_path, dump.dump() + "\n");
    timings["total_seconds"] = seconds_since(t0);
  }
  res.manifest_path = write_manifest(base + "_manifest.json", config.to_json(), timings);
  return res;
}

}  // namespace stdg
