// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Individual criteria can be selected by number on the command line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stdg/analysis.hpp"
#include "stdg/problem.hpp"
#include "stdg/runner.hpp"
#include "support/oracles.hpp"

using namespace stdg;

namespace {

std::string mesh_dir() { return std::string(STDG_SOURCE_DIR) + "/data/meshes"; }

BasisSpec spec_p(int p) {
  BasisSpec s;
  s.degrees.uniform_p = p;
  return s;
}

char buf[512];

// --- C1: polynomial exactness -------------------------------------------

oracles::Poly3 manufactured_poly(int p) {
  using P = oracles::Poly3;
  if (p == 1)
    return P::from({{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}});
  if (p == 2)
    return P::from({{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1},
                    {0.5, 2, 0, 0}, {-1, 1, 1, 0}, {0.25, 0, 2, 0},
                    {0.5, 1, 0, 1}, {-0.5, 0, 1, 1}, {0.75, 0, 0, 2}});
  return P::from({{1, 0, 0, 0},  {1, 1, 0, 0},   {1, 0, 1, 0},  {1, 0, 0, 1},
                  {0.5, 2, 0, 0}, {-1, 1, 1, 0}, {0.25, 0, 2, 0}, {0.5, 1, 0, 1},
                  {-0.5, 0, 1, 1}, {0.75, 0, 0, 2}, {0.3, 3, 0, 0}, {-0.2, 2, 1, 0},
                  {0.4, 1, 2, 0},  {0.1, 0, 3, 0}, {-0.3, 2, 0, 1}, {0.2, 1, 1, 1},
                  {0.6, 0, 2, 1},  {-0.4, 1, 0, 2}, {0.5, 0, 1, 2}, {0.2, 0, 0, 3}});
}

bool criterion1(std::string& detail) {
  double worst = 0.0;
  for (int p : {1, 2, 3}) {
    oracles::Poly3 u = manufactured_poly(p);
    auto ut = u.dt();
    auto lap = u.laplacian();
    auto ux = u.dx();
    auto uy = u.dy();
    ProblemData data;
    data.a = [](double, double, double) { return Eigen::Matrix2d::Identity(); };
    data.f = [ut, lap](double t, double x, double y) { return ut(x, y, t) - lap(x, y, t); };
    data.g_D = [u](double t, double x, double y) { return u(x, y, t); };
    data.u0 = [u](double x, double y) { return u(x, y, 0.0); };
    data.exact = ExactSolution{
        [u](double t, double x, double y) { return u(x, y, t); },
        [ux, uy](double t, double x, double y) {
          return Eigen::Vector2d(ux(x, y, t), uy(x, y, t));
        }};
    SpatialMesh mesh = build_rectangular_mesh(4, 4);
    TimeGrid grid = uniform_partition(1.0, 4);
    DiscreteSolution sol = march(mesh, grid, spec_p(p), data, {});
    ErrorReport rep = error_norms(sol, *data.exact, data, {});
    worst = std::max(worst, rep.e_L2L2);
  }
  std::snprintf(buf, sizeof(buf), "max e_L2L2 = %.3e (tolerance 1e-9)", worst);
  detail = buf;
  return worst <= 1e-9;
}

// --- C2/C3: Example 1 convergence rates ----------------------------------

bool example1_rates(int p, const std::string& kind, double widen, std::string& detail) {
  RunnerOptions opts;
  opts.write_files = false;
  opts.mesh_dir = mesh_dir();
  Example1Result res = run_example1(3, p, kind, opts);
  const ConvergenceRow& last = res.table.rows.back();
  double eoc_h1 = last.eoc_L2H1.value();
  double eoc_l2 = last.eoc_L2L2.value();
  bool ok = eoc_h1 >= p - 0.2 - widen && eoc_h1 <= p + 0.3 + widen &&
            eoc_l2 >= p + 0.3 - widen && eoc_l2 <= p + 1.1 + widen;
  std::snprintf(buf, sizeof(buf),
                "p=%d %s: EOC(L2H1)=%.3f in [%.1f,%.1f], EOC(L2L2)=%.3f in [%.1f,%.1f]", p,
                kind.c_str(), eoc_h1, p - 0.2 - widen, p + 0.3 + widen, eoc_l2,
                p + 0.3 - widen, p + 1.1 + widen);
  detail += buf;
  return ok;
}

bool criterion2(std::string& detail) {
  bool ok1 = example1_rates(1, "rect", 0.0, detail);
  detail += "; ";
  bool ok2 = example1_rates(2, "rect", 0.0, detail);
  return ok1 && ok2;
}

bool criterion3(std::string& detail) { return example1_rates(1, "poly", 0.3, detail); }

// --- C4: Example 2 exponential decay --------------------------------------

bool criterion4(std::string& detail) {
  RunnerOptions opts;
  opts.write_files = false;
  Example2Result res = run_example2(6, 0.1, 1.5, 64, DegreeRound::Ceil, opts);
  bool decreasing = true;
  for (std::size_t k = 1; k < res.rows.size(); ++k)
    decreasing = decreasing && res.rows[k].e_L2L2 < res.rows[k - 1].e_L2L2;

  // Least-squares line through log(e) vs N.
  int n = int(res.rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int k = 0; k < n; ++k) {
    double x = res.rows[k].N;
    double y = std::log(res.rows[k].e_L2L2);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double cov = sxy - sx * sy / n;
  double varx = sxx - sx * sx / n;
  double vary = syy - sy * sy / n;
  double slope = cov / varx;
  double r2 = cov * cov / (varx * vary);
  std::snprintf(buf, sizeof(buf), "monotone=%s, slope=%.3f (<= -0.8), R^2=%.4f (>= 0.95)",
                decreasing ? "yes" : "no", slope, r2);
  detail = buf;
  return decreasing && slope <= -0.8 && r2 >= 0.95;
}

// --- C5: coercivity --------------------------------------------------------

bool criterion5(std::string& detail) {
  AssemblyOptions opts;  // C_sigma = 10
  double global_min = 1e300;
  bool all_positive = true;
  std::mt19937 rng(101);
  std::normal_distribution<double> gauss;

  std::vector<SpatialMesh> meshes;
  meshes.push_back(build_rectangular_mesh(2, 2));
  meshes.push_back(build_rectangular_mesh(4, 4));
  meshes.push_back(load_mesh(mesh_dir() + "/poly_16.json"));
  ProblemData data = make_heat_decay();

  for (const SpatialMesh& mesh : meshes) {
    TimeGrid grid = uniform_partition(2.0 * mesh.h_max, 2);  // tau comparable to h
    for (int p : {1, 2}) {
      std::vector<SlabBases> bases = build_bases(mesh, grid, spec_p(p), opts);
      GlobalSystem sys = assemble_global(mesh, grid, bases, data, opts);
      auto G = dg_norm_gram(mesh, grid, bases, data, opts);
      for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd v(sys.total);
        for (int i = 0; i < sys.total; ++i) v(i) = gauss(rng);
        double bvv = v.dot(sys.matrix * v);
        double nrm = v.dot(G * v);
        all_positive = all_positive && bvv > 0.0;
        global_min = std::min(global_min, bvv / nrm);
      }
    }
  }
  std::snprintf(buf, sizeof(buf), "min B(v,v)/|||v|||^2 = %.4f over 600 samples (>= 0.01)",
                global_min);
  detail = buf;
  return all_positive && global_min >= 0.01;
}

// --- C6: inf-sup aspect-ratio robustness -----------------------------------

bool criterion6(std::string& detail) {
  SpatialMesh mesh = build_rectangular_mesh(2, 2);
  ProblemData data = make_heat_decay();
  InfSupOptions opts;
  double lo = 1e300, hi = 0.0;
  for (double ratio : {0.1, 1.0, 10.0}) {
    double tau = ratio * mesh.h_max;
    TimeGrid grid = uniform_partition(2.0 * tau, 2);
    double v = infsup_estimate(mesh, grid, spec_p(1), data, opts);
    if (v <= 0.0) {
      detail = "estimate not positive";
      return false;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  std::snprintf(buf, sizeof(buf), "infsup range [%.4f, %.4f], ratio %.3f (< 2)", lo, hi,
                hi / lo);
  detail = buf;
  return hi / lo < 2.0;
}

// --- C7: quadrature oracle equivalence -------------------------------------

bool criterion7(std::string& detail) {
  std::mt19937 rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    auto poly = oracles::random_convex_polygon(rng);
    std::vector<Vertex> verts;
    std::vector<int> loop;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      verts.push_back({poly[i].x, poly[i].y});
      loop.push_back(int(i));
    }
    SpatialMesh mesh = build_mesh(verts, {loop});
    QuadRule rule = prism_rule(mesh, 0, 0.0, 1.0, 7);
    for (int a = 0; a <= 7; ++a)
      for (int b = 0; a + b <= 7; ++b)
        for (int c = 0; a + b + c <= 7; ++c) {
          double acc = 0.0;
          for (std::size_t q = 0; q < rule.size(); ++q)
            acc += rule.weights[q] * std::pow(rule.points[q][0], a) *
                   std::pow(rule.points[q][1], b) * std::pow(rule.points[q][2], c);
          double ref = oracles::prism_monomial(poly, a, b, c, 0.0, 1.0);
          worst = std::max(worst, std::abs(acc - ref) / std::abs(ref));
        }
  }
  std::snprintf(buf, sizeof(buf), "max relative deviation %.3e (<= 1e-12)", worst);
  detail = buf;
  return worst <= 1e-12;
}

// --- C8: face-splitting invariance -----------------------------------------

bool criterion8(std::string& detail) {
  std::vector<Vertex> verts;
  std::vector<std::vector<int>> loops;
  oracles::unit_grid(2, verts, loops);
  SpatialMesh base = build_mesh(verts, loops);
  SpatialMesh split = oracles::split_faces(verts, loops, 3);

  ProblemData data = make_example1();
  TimeGrid grid = uniform_partition(1.0, 10);
  MarchOptions mopts;
  mopts.assembly.data_order_offset = 8;  // converge the g_D data integrals
  int quad_order = 18;                   // converge the error quadrature itself

  DiscreteSolution s1 = march(base, grid, spec_p(2), data, mopts);
  DiscreteSolution s2 = march(split, grid, spec_p(2), data, mopts);
  ErrorReport r1 = error_norms(s1, *data.exact, data, mopts.assembly, quad_order);
  ErrorReport r2 = error_norms(s2, *data.exact, data, mopts.assembly, quad_order);
  double rel = std::abs(r1.e_L2L2 - r2.e_L2L2) / r1.e_L2L2;
  std::snprintf(buf, sizeof(buf), "relative e_L2L2 change %.3e (<= 1e-10)", rel);
  detail = buf;
  return rel <= 1e-10;
}

// --- C9: inverse estimates ---------------------------------------------------

bool criterion9(std::string& detail) {
  std::mt19937 rng(909);
  std::normal_distribution<double> gauss;
  AssemblyOptions opts;
  int violations = 0;
  double cfit_coarse = 0.0, cfit_fine = 0.0;

  // Configurations: element shape x degree x refinement level.
  for (int level = 0; level < 2; ++level) {
    double scale = level == 0 ? 1.0 : 0.5;
    double& cfit = level == 0 ? cfit_coarse : cfit_fine;
    std::vector<std::vector<Vertex>> shapes;
    shapes.push_back({{0, 0}, {scale, 0}, {scale, scale}, {0, scale}});
    std::vector<Vertex> hex;
    for (int k = 0; k < 6; ++k)
      hex.push_back({scale * (0.5 + 0.45 * std::cos(M_PI * k / 3.0)),
                     scale * (0.5 + 0.45 * std::sin(M_PI * k / 3.0))});
    shapes.push_back(hex);

    for (const auto& verts : shapes) {
      std::vector<int> loop(verts.size());
      for (std::size_t i = 0; i < verts.size(); ++i) loop[i] = int(i);
      SpatialMesh mesh = build_mesh(verts, {loop});
      double tau = 0.4 * scale;
      for (int p : {1, 2, 3}) {
        IndexSet set{IndexSetKind::TotalDegree, p};
        auto bb = mesh.element_bbox(0);
        PrismBox box{bb[0], bb[1], bb[2], bb[3], 0.0, tau};
        QuadRule rule = prism_rule(mesh, 0, 0.0, tau, 2 * p + opts.quad_order_offset);
        ElementBasis basis = orthonormalize(set, 0, 0, box, rule);
        const auto& st = mesh.sub_triangulation.per_element[0];

        // Gram matrices of the face, tagged-simplex and horizontal traces.
        std::vector<Eigen::MatrixXd> face_gram, simplex_gram;
        for (int fidx : mesh.element_faces[0]) {
          const Face& face = mesh.faces[fidx];
          QuadRule fr = vertical_face_rule(face, mesh, 0.0, tau, 2 * p + 2);
          Eigen::MatrixXd V;
          basis.evaluate(fr.points, &V, nullptr, nullptr, nullptr);
          Eigen::MatrixXd G = Eigen::MatrixXd::Zero(basis.size(), basis.size());
          for (std::size_t q = 0; q < fr.size(); ++q)
            G += fr.weights[q] * V.col(q) * V.col(q).transpose();
          face_gram.push_back(G);

          const SubTriangle& sF = st.triangles[st.face_to_triangle.at(face.id)];
          TriangleRule tr = triangle_rule(sF.v[0], sF.v[1], sF.v[2], 2 * p + 2);
          Gauss1D gt = gauss_legendre(gauss_count(2 * p + 2));
          std::vector<std::array<double, 3>> pts;
          std::vector<double> w;
          for (std::size_t q = 0; q < tr.points.size(); ++q)
            for (std::size_t k = 0; k < gt.points.size(); ++k) {
              pts.push_back({tr.points[q].x, tr.points[q].y, tau * gt.points[k]});
              w.push_back(tr.weights[q] * tau * gt.weights[k]);
            }
          Eigen::MatrixXd Vs;
          basis.evaluate(pts, &Vs, nullptr, nullptr, nullptr);
          Eigen::MatrixXd Gs = Eigen::MatrixXd::Zero(basis.size(), basis.size());
          for (std::size_t q = 0; q < pts.size(); ++q)
            Gs += w[q] * Vs.col(q) * Vs.col(q).transpose();
          simplex_gram.push_back(Gs);
        }
        QuadRule h0 = horizontal_face_rule(mesh, 0, 2 * p + 2, 0.0);
        Eigen::MatrixXd V0;
        basis.evaluate(h0.points, &V0, nullptr, nullptr, nullptr);
        Eigen::MatrixXd G0 = Eigen::MatrixXd::Zero(basis.size(), basis.size());
        for (std::size_t q = 0; q < h0.size(); ++q)
          G0 += h0.weights[q] * V0.col(q) * V0.col(q).transpose();

        for (int trial = 0; trial < 200; ++trial) {
          Eigen::VectorXd c(basis.size());
          for (int i = 0; i < basis.size(); ++i) c(i) = gauss(rng);
          double vol = c.squaredNorm();  // orthonormal basis

          for (std::size_t fi = 0; fi < face_gram.size(); ++fi) {
            const Face& face = mesh.faces[mesh.element_faces[0][fi]];
            const SubTriangle& sF = st.triangles[st.face_to_triangle.at(face.id)];
            double lhs = c.dot(face_gram[fi] * c);
            double rhs = (p + 1) * (p + 2) / 2.0 * face.length / sF.area *
                         c.dot(simplex_gram[fi] * c);
            if (lhs > rhs * (1.0 + 1e-12) + 1e-14) ++violations;
          }
          // Horizontal-trace inverse bound: fitted constant.
          double trace2 = c.dot(G0 * c);
          cfit = std::max(cfit, trace2 * tau / (p * p * vol));
        }
      }
    }
  }
  bool stable = cfit_fine <= 2.0 * cfit_coarse && cfit_coarse <= 2.0 * cfit_fine;
  std::snprintf(buf, sizeof(buf),
                "violations=%d (must be 0); fitted C: coarse %.3f, refined %.3f (stable)",
                violations, cfit_coarse, cfit_fine);
  detail = buf;
  return violations == 0 && stable;
}

// --- C10: cardinality economy ------------------------------------------------

bool criterion10(std::string& detail) {
  int cp = IndexSet{IndexSetKind::TotalDegree, 2}.cardinality();
  int cpq = IndexSet{IndexSetKind::TimeTensorTotalSpace, 2}.cardinality();
  int cq = IndexSet{IndexSetKind::FullTensor, 2}.cardinality();
  std::snprintf(buf, sizeof(buf), "P=%d, PQ=%d, Q=%d", cp, cpq, cq);
  detail = buf;
  return cp == 10 && cpq == 18 && cq == 27 && cp < cpq && cpq < cq;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  std::vector<Criterion> criteria = {
      {1, "polynomial exactness (p = 1..3)", criterion1},
      {2, "Example 1 rates, rectangular (p = 1, 2)", criterion2},
      {3, "Example 1 rates, polygonal (p = 1)", criterion3},
      {4, "Example 2 hp decay (sigma = 0.1, mu = 1.5)", criterion4},
      {5, "coercivity of B against the dG norm", criterion5},
      {6, "inf-sup robustness in tau/h", criterion6},
      {7, "quadrature oracle equivalence", criterion7},
      {8, "face-splitting invariance", criterion8},
      {9, "inverse estimates", criterion9},
      {10, "basis cardinality economy", criterion10},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s — %s (%.1f s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
