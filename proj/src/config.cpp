#include "stdg/config.hpp"

#include <filesystem>
#include <fstream>

#include "stdg/errors.hpp"
#include "stdg/expr.hpp"
#include "stdg/problem.hpp"
#include "stdg/timegrid.hpp"

namespace stdg {

namespace {

using nlohmann::json;

template <typename T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + ": wrong type");
  }
}

}  // namespace

IndexSetKind parse_index_set_kind(const std::string& name) {
  if (name == "P") return IndexSetKind::TotalDegree;
  if (name == "PQ") return IndexSetKind::TimeTensorTotalSpace;
  if (name == "Q") return IndexSetKind::FullTensor;
  throw ConfigError("basis.kind: must be one of P, PQ, Q (got '" + name + "')");
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return from_json(j);
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;

  if (j.contains("problem")) {
    const json& p = j.at("problem");
    c.problem_name = get_or<std::string>(p, "name", c.problem_name, "problem");
    if (c.problem_name != "example1" && c.problem_name != "example2" &&
        c.problem_name != "heat_decay" && c.problem_name != "custom")
      throw ConfigError("problem.name: unknown problem '" + c.problem_name + "'");
    if (c.problem_name == "custom") {
      if (!p.contains("custom")) throw ConfigError("problem.custom: required for name=custom");
      const json& cu = p.at("custom");
      CustomProblem cp;
      if (cu.contains("a")) {
        const json& a = cu.at("a");
        if (a.is_string()) {
          cp.a = {a.get<std::string>(), "0", a.get<std::string>()};
        } else if (a.is_array() && a.size() == 3) {
          cp.a = {a.at(0).get<std::string>(), a.at(1).get<std::string>(),
                  a.at(2).get<std::string>()};
        } else {
          throw ConfigError("problem.custom.a: scalar expression or [axx, axy, ayy]");
        }
      }
      cp.theta = get_or<double>(cu, "theta", 1.0, "problem.custom");
      if (!(cp.theta > 0.0)) throw ConfigError("problem.custom.theta: must be > 0");
      cp.f = get_or<std::string>(cu, "f", "0", "problem.custom");
      cp.g_D = get_or<std::string>(cu, "g_D", "0", "problem.custom");
      cp.u0 = get_or<std::string>(cu, "u0", "0", "problem.custom");
      cp.exact = get_or<std::string>(cu, "exact", "", "problem.custom");
      // Parse now so that malformed expressions fail before any compute.
      for (const auto& [field, text] :
           {std::pair<std::string, std::string>{"a", cp.a[0]},
            {"a", cp.a[1]},
            {"a", cp.a[2]},
            {"f", cp.f},
            {"g_D", cp.g_D},
            {"u0", cp.u0}}) {
        try {
          Expr::parse(text);
        } catch (const ParseError& e) {
          throw ConfigError("problem.custom." + field + ": " + e.what());
        }
      }
      if (!cp.exact.empty()) {
        try {
          Expr::parse(cp.exact).diff('x');
        } catch (const ParseError& e) {
          throw ConfigError("problem.custom.exact: " + std::string(e.what()));
        }
      }
      c.custom = cp;
    }
  }

  if (j.contains("mesh")) {
    const json& m = j.at("mesh");
    c.mesh_kind = get_or<std::string>(m, "kind", c.mesh_kind, "mesh");
    if (c.mesh_kind == "rect") {
      c.nx = get_or<int>(m, "nx", c.nx, "mesh");
      c.ny = get_or<int>(m, "ny", c.ny, "mesh");
      if (c.nx < 1) throw ConfigError("mesh.nx: must be >= 1");
      if (c.ny < 1) throw ConfigError("mesh.ny: must be >= 1");
      if (m.contains("domain")) {
        auto d = m.at("domain").get<std::vector<double>>();
        if (d.size() != 4) throw ConfigError("mesh.domain: expected [x0, x1, y0, y1]");
        c.domain = Rect{d[0], d[2], d[1], d[3]};
        if (!(d[1] > d[0] && d[3] > d[2])) throw ConfigError("mesh.domain: empty rectangle");
      }
    } else if (c.mesh_kind == "file") {
      c.mesh_path = get_or<std::string>(m, "path", "", "mesh");
      if (c.mesh_path.empty()) throw ConfigError("mesh.path: required for kind=file");
      if (!std::filesystem::exists(c.mesh_path))
        throw ConfigError("mesh.path: file does not exist: " + c.mesh_path);
    } else {
      throw ConfigError("mesh.kind: must be 'rect' or 'file'");
    }
    c.cs_warn_threshold = get_or<double>(m, "cs_warn", c.cs_warn_threshold, "mesh");
    if (!(c.cs_warn_threshold > 0.0)) throw ConfigError("mesh.cs_warn: must be > 0");
  }

  if (j.contains("time")) {
    const json& t = j.at("time");
    c.time_kind = get_or<std::string>(t, "kind", c.time_kind, "time");
    if (c.time_kind != "uniform" && c.time_kind != "geometric")
      throw ConfigError("time.kind: must be 'uniform' or 'geometric'");
    c.T = get_or<double>(t, "T", c.T, "time");
    c.N = get_or<int>(t, "N", c.N, "time");
    c.sigma = get_or<double>(t, "sigma", c.sigma, "time");
    if (!(c.T > 0.0)) throw ConfigError("time.T: must be > 0");
    if (c.N < 1) throw ConfigError("time.N: must be >= 1");
    if (c.time_kind == "geometric" && !(c.sigma > 0.0 && c.sigma < 1.0))
      throw ConfigError("time.sigma: must be in (0,1)");
  }

  if (j.contains("basis")) {
    const json& b = j.at("basis");
    c.basis_kind = get_or<std::string>(b, "kind", c.basis_kind, "basis");
    parse_index_set_kind(c.basis_kind);
    c.p = get_or<int>(b, "p", c.p, "basis");
    if (c.p < 1) throw ConfigError("basis.p: must be >= 1");
    if (b.contains("degree_map")) {
      const json& dm = b.at("degree_map");
      if (dm.contains("per_slab")) {
        c.degree_per_slab = dm.at("per_slab").get<std::vector<int>>();
        for (int d : *c.degree_per_slab)
          if (d < 1) throw ConfigError("basis.degree_map.per_slab: degrees must be >= 1");
      }
      if (dm.contains("per_element")) {
        std::map<int, int> pe;
        for (const auto& [key, val] : dm.at("per_element").items()) {
          int d = val.get<int>();
          if (d < 1) throw ConfigError("basis.degree_map.per_element: degrees must be >= 1");
          pe[std::stoi(key)] = d;
        }
        c.degree_per_element = pe;
      }
    }
  }

  if (j.contains("penalty")) {
    c.C_sigma = get_or<double>(j.at("penalty"), "C_sigma", c.C_sigma, "penalty");
    if (!(c.C_sigma > 0.0)) throw ConfigError("penalty.C_sigma: must be > 0");
  }
  if (j.contains("quad")) {
    c.quad_order_offset = get_or<int>(j.at("quad"), "order_offset", c.quad_order_offset, "quad");
    c.data_order_offset =
        get_or<int>(j.at("quad"), "data_order_offset", c.data_order_offset, "quad");
    if (c.quad_order_offset < 1) throw ConfigError("quad.order_offset: must be >= 1");
    if (c.data_order_offset < 0) throw ConfigError("quad.data_order_offset: must be >= 0");
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    c.solver_tol = get_or<double>(s, "tol", c.solver_tol, "solver");
    c.direct_threshold = get_or<int>(s, "direct_threshold", c.direct_threshold, "solver");
    c.max_iters = get_or<int>(s, "max_iters", c.max_iters, "solver");
    if (!(c.solver_tol > 0.0)) throw ConfigError("solver.tol: must be > 0");
    if (c.max_iters < 1) throw ConfigError("solver.max_iters: must be >= 1");
  }
  if (j.contains("diag"))
    c.infsup_cap = get_or<int>(j.at("diag"), "infsup_cap", c.infsup_cap, "diag");
  c.threads = get_or<int>(j, "threads", c.threads, "");
  if (j.contains("output")) {
    const json& o = j.at("output");
    c.out_dir = get_or<std::string>(o, "dir", c.out_dir, "output");
    c.prefix = get_or<std::string>(o, "prefix", c.prefix, "output");
  }
  return c;
}

nlohmann::json RunConfig::to_json() const {
  json j;
  j["problem"]["name"] = problem_name;
  if (custom) {
    j["problem"]["custom"] = {{"a", {custom->a[0], custom->a[1], custom->a[2]}},
                              {"theta", custom->theta},
                              {"f", custom->f},
                              {"g_D", custom->g_D},
                              {"u0", custom->u0}};
    if (!custom->exact.empty()) j["problem"]["custom"]["exact"] = custom->exact;
  }
  j["mesh"]["kind"] = mesh_kind;
  if (mesh_kind == "rect") {
    j["mesh"]["nx"] = nx;
    j["mesh"]["ny"] = ny;
    j["mesh"]["domain"] = {domain.x0, domain.x1, domain.y0, domain.y1};
  } else {
    j["mesh"]["path"] = mesh_path;
  }
  j["mesh"]["cs_warn"] = cs_warn_threshold;
  j["time"] = {{"kind", time_kind}, {"T", T}, {"N", N}};
  if (time_kind == "geometric") j["time"]["sigma"] = sigma;
  j["basis"] = {{"kind", basis_kind}, {"p", p}};
  if (degree_per_slab) j["basis"]["degree_map"]["per_slab"] = *degree_per_slab;
  if (degree_per_element) {
    json pe;
    for (const auto& [k, v] : *degree_per_element) pe[std::to_string(k)] = v;
    j["basis"]["degree_map"]["per_element"] = pe;
  }
  j["penalty"]["C_sigma"] = C_sigma;
  j["quad"] = {{"order_offset", quad_order_offset}, {"data_order_offset", data_order_offset}};
  j["solver"] = {{"tol", solver_tol},
                 {"direct_threshold", direct_threshold},
                 {"max_iters", max_iters}};
  j["diag"]["infsup_cap"] = infsup_cap;
  j["threads"] = threads;
  j["output"] = {{"dir", out_dir}, {"prefix", prefix}};
  return j;
}

SpatialMesh RunConfig::make_mesh() const {
  if (mesh_kind == "rect") return build_rectangular_mesh(nx, ny, domain);
  return load_mesh(mesh_path);
}

TimeGrid RunConfig::make_grid() const {
  if (time_kind == "geometric") return geometric_partition(T, N, sigma);
  return uniform_partition(T, N);
}

BasisSpec RunConfig::make_basis_spec() const {
  BasisSpec spec;
  spec.kind = parse_index_set_kind(basis_kind);
  spec.degrees.uniform_p = p;
  spec.degrees.per_slab = degree_per_slab;
  spec.degrees.per_element = degree_per_element;
  return spec;
}

ProblemData RunConfig::make_data() const {
  if (problem_name != "custom") return make_problem(problem_name);
  const CustomProblem& cp = *custom;
  Expr axx = Expr::parse(cp.a[0]);
  Expr axy = Expr::parse(cp.a[1]);
  Expr ayy = Expr::parse(cp.a[2]);
  Expr f = Expr::parse(cp.f);
  Expr gd = Expr::parse(cp.g_D);
  Expr u0 = Expr::parse(cp.u0);
  ProblemData data;
  data.theta = cp.theta;
  data.a = [axx, axy, ayy](double t, double x, double y) {
    Eigen::Matrix2d a;
    double oxx = axx(x, y, t), oxy = axy(x, y, t), oyy = ayy(x, y, t);
    a << oxx, oxy, oxy, oyy;
    return a;
  };
  data.f = [f](double t, double x, double y) { return f(x, y, t); };
  data.g_D = [gd](double t, double x, double y) { return gd(x, y, t); };
  data.u0 = [u0](double x, double y) { return u0(x, y, 0.0); };
  if (!cp.exact.empty()) {
    Expr ex = Expr::parse(cp.exact);
    Expr ex_x = ex.diff('x');
    Expr ex_y = ex.diff('y');
    data.exact = ExactSolution{
        [ex](double t, double x, double y) { return ex(x, y, t); },
        [ex_x, ex_y](double t, double x, double y) {
          return Eigen::Vector2d(ex_x(x, y, t), ex_y(x, y, t));
        },
    };
  }
  return data;
}

AssemblyOptions RunConfig::assembly_options() const {
  AssemblyOptions opts;
  opts.C_sigma = C_sigma;
  opts.quad_order_offset = quad_order_offset;
  opts.data_order_offset = data_order_offset;
  opts.threads = threads;
  return opts;
}

MarchOptions RunConfig::march_options() const {
  MarchOptions opts;
  opts.assembly = assembly_options();
  opts.solver.tol = solver_tol;
  opts.solver.direct_threshold = direct_threshold;
  opts.solver.max_iters = max_iters;
  return opts;
}

}  // namespace stdg
