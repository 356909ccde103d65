#include "stdg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "stdg/errors.hpp"
#include "stdg/parallel.hpp"

namespace stdg {

namespace {

using Triplet = Eigen::Triplet<double>;
using SparseRM = Eigen::SparseMatrix<double, Eigen::RowMajor>;

std::vector<double> merged_breakpoints(const TimeSlab& slab, int e1, int e2) {
  std::vector<double> pts{slab.t_start, slab.t_end};
  for (int e : {e1, e2}) {
    if (e < 0) continue;
    if (const auto* bp = slab.breakpoints(e)) pts.insert(pts.end(), bp->begin(), bp->end());
  }
  std::sort(pts.begin(), pts.end());
  double tol = 1e-13 * std::max(1.0, slab.t_end - slab.t_start);
  std::vector<double> out;
  for (double t : pts)
    if (out.empty() || t - out.back() > tol) out.push_back(t);
  return out;
}

int substep_of(const TimeSlab& slab, int element, double t) {
  const auto* bp = slab.breakpoints(element);
  if (!bp) return 0;
  for (std::size_t j = 0; j + 1 < bp->size(); ++j)
    if (t < (*bp)[j + 1] || j + 2 == bp->size()) return int(j);
  return 0;
}

Eigen::MatrixXd apply_weights(const Eigen::MatrixXd& X, const std::vector<double>& w) {
  Eigen::MatrixXd Xw = X;
  for (int q = 0; q < Xw.cols(); ++q) Xw.col(q) *= w[q];
  return Xw;
}

// Spatial L2 norm squared of (exact - u_h)(., t) over the mesh.
double spatial_error_sq(const DiscreteSolution& sol, const ExactSolution& exact, int slab,
                        double t, bool minus, int order) {
  const SpatialMesh& mesh = *sol.mesh;
  double acc = 0.0;
  for (const auto& el : mesh.elements) {
    int j = sol.locate_substep(slab, el.id, t, minus ? Side::Minus : Side::Plus);
    QuadRule hr = horizontal_face_rule(mesh, el.id, order, t);
    const SlabSolution& s = sol.slabs[slab];
    const ElementBasis& b = s.bases.at(el.id, j);
    Eigen::MatrixXd V;
    b.evaluate(hr.points, &V, nullptr, nullptr, nullptr);
    Eigen::VectorXd uh =
        V.transpose() * s.coeffs.segment(s.dof_map(el.id, j, 0), b.size());
    for (std::size_t q = 0; q < hr.size(); ++q) {
      double e = exact.value(t, hr.points[q][0], hr.points[q][1]) - uh(q);
      acc += hr.weights[q] * e * e;
    }
  }
  return acc;
}

}  // namespace

ErrorReport error_norms(const DiscreteSolution& solution, const ExactSolution& exact,
                        const ProblemData& data, const AssemblyOptions& opts,
                        int quad_order) {
  const SpatialMesh& mesh = *solution.mesh;
  const TimeGrid& grid = solution.grid;
  ErrorReport rep;
  rep.dofs = solution.total_dofs();
  rep.h_max = mesh.h_max;

  double l2l2 = 0.0, h1 = 0.0, dg_grad = 0.0, dg_jump = 0.0, linf2 = 0.0;

  for (int n = 0; n < grid.num_slabs(); ++n) {
    const TimeSlab& slab = grid.slabs[n];
    rep.tau_max = std::max(rep.tau_max, slab.tau());
    const SlabSolution& s = solution.slabs[n];

    // Volume terms, tensorized spatial x time quadrature per sub-step.
    // Element contributions run in parallel and reduce in element order.
    std::vector<std::array<double, 3>> partial(mesh.elements.size(), {0.0, 0.0, 0.0});
    parallel_for(mesh.elements.size(), opts.threads, [&](std::size_t ei) {
      int e = int(ei);
      for (int j = 0; j < slab.substeps(e); ++j) {
        const ElementBasis& b = s.bases.at(e, j);
        int order = quad_order > 0 ? quad_order : 2 * b.index_set.quad_degree() + 4;
        auto [t0, t1] = slab.substep_interval(e, j);
        QuadRule sp = horizontal_face_rule(mesh, e, order);
        Gauss1D gt;
        if (data.f_time_alpha && t0 == 0.0) {
          gt = sqrt_graded_time_rule(t1, gauss_count(2 * order + 2));
        } else {
          gt = gauss_legendre(gauss_count(order));
          for (auto& tq : gt.points) tq = t0 + (t1 - t0) * tq;
          for (auto& wq : gt.weights) wq *= (t1 - t0);
        }
        std::vector<std::array<double, 3>> pts;
        pts.reserve(sp.size() * gt.points.size());
        for (std::size_t q = 0; q < sp.size(); ++q)
          for (std::size_t k = 0; k < gt.points.size(); ++k)
            pts.push_back({sp.points[q][0], sp.points[q][1], gt.points[k]});
        Eigen::MatrixXd V, DX, DY;
        b.evaluate(pts, &V, &DX, &DY, nullptr);
        auto c = s.coeffs.segment(s.dof_map(e, j, 0), b.size());
        Eigen::VectorXd uh = V.transpose() * c;
        Eigen::VectorXd ux = DX.transpose() * c;
        Eigen::VectorXd uy = DY.transpose() * c;
        std::size_t idx = 0;
        for (std::size_t q = 0; q < sp.size(); ++q) {
          for (std::size_t k = 0; k < gt.points.size(); ++k, ++idx) {
            double w = sp.weights[q] * gt.weights[k];
            const auto& pt = pts[idx];
            double ev = exact.value(pt[2], pt[0], pt[1]) - uh(idx);
            Eigen::Vector2d eg =
                exact.gradient(pt[2], pt[0], pt[1]) - Eigen::Vector2d(ux(idx), uy(idx));
            partial[ei][0] += w * ev * ev;
            partial[ei][1] += w * eg.squaredNorm();
            Eigen::Matrix2d a = data.a(pt[2], pt[0], pt[1]);
            partial[ei][2] += w * eg.dot(a * eg);
          }
        }
      }
    });
    for (const auto& part : partial) {
      l2l2 += part[0];
      h1 += part[1];
      dg_grad += part[2];
    }

    // Penalized jump terms of the dG norm along vertical faces.
    PenaltyField penalty = build_penalty_field(mesh, slab, s.bases, data, opts);
    for (const Face& face : mesh.faces) {
      int e1 = face.elements[0];
      int e2 = face.elements[1];
      bool interior = face.kind == FaceKind::Interior;
      double sigma = penalty.sigma[face.id];
      auto breaks = merged_breakpoints(slab, e1, e2);
      for (std::size_t sb = 0; sb + 1 < breaks.size(); ++sb) {
        double s0 = breaks[sb], s1 = breaks[sb + 1];
        double mid = 0.5 * (s0 + s1);
        int j1 = substep_of(slab, e1, mid);
        const ElementBasis& b1 = s.bases.at(e1, j1);
        int order = quad_order > 0 ? quad_order : 2 * b1.index_set.quad_degree() + 4;
        QuadRule rule = vertical_face_rule(face, mesh, s0, s1, order);
        Eigen::MatrixXd V1;
        b1.evaluate(rule.points, &V1, nullptr, nullptr, nullptr);
        Eigen::VectorXd uh1 =
            V1.transpose() * s.coeffs.segment(s.dof_map(e1, j1, 0), b1.size());
        if (interior) {
          int j2 = substep_of(slab, e2, mid);
          const ElementBasis& b2 = s.bases.at(e2, j2);
          Eigen::MatrixXd V2;
          b2.evaluate(rule.points, &V2, nullptr, nullptr, nullptr);
          Eigen::VectorXd uh2 =
              V2.transpose() * s.coeffs.segment(s.dof_map(e2, j2, 0), b2.size());
          for (std::size_t q = 0; q < rule.size(); ++q) {
            double jmp = uh1(q) - uh2(q);  // exact solution is continuous
            dg_jump += rule.weights[q] * sigma * jmp * jmp;
          }
        } else {
          for (std::size_t q = 0; q < rule.size(); ++q) {
            double jmp =
                exact.value(rule.points[q][2], rule.points[q][0], rule.points[q][1]) -
                uh1(q);
            dg_jump += rule.weights[q] * sigma * jmp * jmp;
          }
        }
      }
    }

    // L_inf(L2) samples: temporal quadrature points plus the slab end node.
    {
      int order0 =
          quad_order > 0 ? quad_order : 2 * s.bases.at(0, 0).index_set.quad_degree() + 4;
      std::vector<double> times;
      if (data.f_time_alpha && slab.t_start == 0.0) {
        Gauss1D gt = sqrt_graded_time_rule(slab.tau(), gauss_count(order0));
        times = gt.points;
      } else {
        Gauss1D gt = gauss_legendre(gauss_count(order0));
        for (double tq : gt.points) times.push_back(slab.t_start + slab.tau() * tq);
      }
      for (double t : times)
        linf2 = std::max(linf2, spatial_error_sq(solution, exact, n, t, true, order0));
      linf2 = std::max(linf2,
                       spatial_error_sq(solution, exact, n, slab.t_end, true, order0));
    }
  }

  // Temporal jump terms of the dG norm at the slab nodes.
  double dg_time = 0.0;
  {
    int order = quad_order > 0
                    ? quad_order
                    : 2 * solution.slabs[0].bases.at(0, 0).index_set.quad_degree() + 4;
    // (1/2)||u0 - u_h(0+)||^2
    double acc = 0.0;
    for (const auto& el : mesh.elements) {
      const SlabSolution& s = solution.slabs[0];
      const ElementBasis& b = s.bases.at(el.id, 0);
      QuadRule hr = horizontal_face_rule(mesh, el.id, order, 0.0);
      Eigen::MatrixXd V;
      b.evaluate(hr.points, &V, nullptr, nullptr, nullptr);
      Eigen::VectorXd uh =
          V.transpose() * s.coeffs.segment(s.dof_map(el.id, 0, 0), b.size());
      for (std::size_t q = 0; q < hr.size(); ++q) {
        double e = exact.value(0.0, hr.points[q][0], hr.points[q][1]) - uh(q);
        acc += hr.weights[q] * e * e;
      }
    }
    dg_time += 0.5 * acc;

    // (1/2)||[u_h]_n||^2 at interior nodes (the exact solution is continuous).
    for (int n = 1; n < grid.num_slabs(); ++n) {
      double node = grid.slabs[n].t_start;
      double jacc = 0.0;
      for (const auto& el : mesh.elements) {
        const SlabSolution& cur = solution.slabs[n];
        const SlabSolution& prev = solution.slabs[n - 1];
        const ElementBasis& bc = cur.bases.at(el.id, 0);
        int jp = grid.slabs[n - 1].substeps(el.id) - 1;
        const ElementBasis& bp = prev.bases.at(el.id, jp);
        QuadRule hr = horizontal_face_rule(mesh, el.id, order, node);
        Eigen::MatrixXd Vc, Vp;
        bc.evaluate(hr.points, &Vc, nullptr, nullptr, nullptr);
        bp.evaluate(hr.points, &Vp, nullptr, nullptr, nullptr);
        Eigen::VectorXd uc =
            Vc.transpose() * cur.coeffs.segment(cur.dof_map(el.id, 0, 0), bc.size());
        Eigen::VectorXd up =
            Vp.transpose() * prev.coeffs.segment(prev.dof_map(el.id, jp, 0), bp.size());
        for (std::size_t q = 0; q < hr.size(); ++q) {
          double jmp = uc(q) - up(q);
          jacc += hr.weights[q] * jmp * jmp;
        }
      }
      dg_time += 0.5 * jacc;
    }

    // (1/2)||u(T) - u_h(T-)||^2
    double facc = 0.0;
    int N = grid.num_slabs();
    for (const auto& el : mesh.elements) {
      const SlabSolution& s = solution.slabs[N - 1];
      int j = grid.slabs[N - 1].substeps(el.id) - 1;
      const ElementBasis& b = s.bases.at(el.id, j);
      QuadRule hr = horizontal_face_rule(mesh, el.id, order, grid.T);
      Eigen::MatrixXd V;
      b.evaluate(hr.points, &V, nullptr, nullptr, nullptr);
      Eigen::VectorXd uh =
          V.transpose() * s.coeffs.segment(s.dof_map(el.id, j, 0), b.size());
      for (std::size_t q = 0; q < hr.size(); ++q) {
        double e = exact.value(grid.T, hr.points[q][0], hr.points[q][1]) - uh(q);
        facc += hr.weights[q] * e * e;
      }
    }
    dg_time += 0.5 * facc;
  }

  rep.e_L2L2 = std::sqrt(l2l2);
  rep.e_L2H1 = std::sqrt(h1);
  rep.e_L2H1_full = std::sqrt(h1 + l2l2);
  rep.e_LinfL2 = std::sqrt(linf2);
  rep.dg_norm_of_error = std::sqrt(dg_grad + dg_jump + dg_time);
  return rep;
}

ConvergenceRow make_row(int level, const ErrorReport& r) {
  ConvergenceRow row;
  row.level = level;
  row.h_max = r.h_max;
  row.tau_max = r.tau_max;
  row.dofs = r.dofs;
  row.e_L2L2 = r.e_L2L2;
  row.e_L2H1 = r.e_L2H1;
  row.e_LinfL2 = r.e_LinfL2;
  row.dg_norm = r.dg_norm_of_error;
  row.e_L2H1_full = r.e_L2H1_full;
  return row;
}

ConvergenceTable eoc(std::vector<ConvergenceRow> rows) {
  if (rows.size() < 2) throw std::invalid_argument("eoc: need at least 2 rows");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (!(rows[k].h_max < rows[k - 1].h_max))
      throw std::invalid_argument("eoc: h_max must be strictly decreasing");
    double lh = std::log(rows[k - 1].h_max / rows[k].h_max);
    rows[k].eoc_L2L2 = std::log(rows[k - 1].e_L2L2 / rows[k].e_L2L2) / lh;
    rows[k].eoc_L2H1 = std::log(rows[k - 1].e_L2H1 / rows[k].e_L2H1) / lh;
    rows[k].eoc_LinfL2 = std::log(rows[k - 1].e_LinfL2 / rows[k].e_LinfL2) / lh;
  }
  ConvergenceTable table;
  table.rows = std::move(rows);
  return table;
}

std::string ConvergenceTable::to_csv() const {
  std::string out =
      "level,h_max,tau_max,dofs,e_L2L2,eoc_L2L2,e_L2H1,eoc_L2H1,e_LinfL2,eoc_LinfL2,"
      "dg_norm,e_L2H1_full\n";
  char buf[512];
  auto fmt_opt = [](std::optional<double> v) {
    if (!v) return std::string();
    char b[64];
    std::snprintf(b, sizeof(b), "%.6f", *v);
    return std::string(b);
  };
  for (const ConvergenceRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.10e,%.10e,%ld,%.12e,%s,%.12e,%s,%.12e,%s,%.12e,%.12e\n",
                  r.level, r.h_max, r.tau_max, r.dofs, r.e_L2L2, fmt_opt(r.eoc_L2L2).c_str(),
                  r.e_L2H1, fmt_opt(r.eoc_L2H1).c_str(), r.e_LinfL2,
                  fmt_opt(r.eoc_LinfL2).c_str(), r.dg_norm, r.e_L2H1_full);
    out += buf;
  }
  return out;
}

namespace {

// Assembles the shared structure of the two norm Gram matrices.
SparseRM norm_gram(const SpatialMesh& mesh, const TimeGrid& grid,
                   const std::vector<SlabBases>& bases, const ProblemData& data,
                   const AssemblyOptions& opts, bool streamline) {
  std::vector<DofMap> dofs;
  std::vector<int> offset;
  int total = 0;
  for (int n = 0; n < grid.num_slabs(); ++n) {
    dofs.push_back(build_dof_map(bases[n]));
    offset.push_back(total);
    total += dofs.back().total;
  }
  auto gdof = [&](int n, int e, int j, int i) { return offset[n] + dofs[n](e, j, i); };

  std::vector<Triplet> trip;
  for (int n = 0; n < grid.num_slabs(); ++n) {
    const TimeSlab& slab = grid.slabs[n];
    const SlabBases& sb = bases[n];

    // Neighbour-degree bound per element (for the SD weight lambda).
    std::vector<int> phat(mesh.elements.size(), 1);
    if (streamline) {
      for (const auto& el : mesh.elements) {
        int pm = 0;
        for (int j = 0; j < slab.substeps(el.id); ++j)
          pm = std::max(pm, sb.at(el.id, j).index_set.p);
        phat[el.id] = pm;
      }
      std::vector<int> phat2 = phat;
      for (const Face& f : mesh.faces)
        if (f.kind == FaceKind::Interior) {
          phat2[f.elements[0]] = std::max(phat2[f.elements[0]], phat[f.elements[1]]);
          phat2[f.elements[1]] = std::max(phat2[f.elements[1]], phat[f.elements[0]]);
        }
      phat = phat2;
    }

    for (const auto& el : mesh.elements) {
      int e = el.id;
      for (int j = 0; j < slab.substeps(e); ++j) {
        const ElementBasis& b = sb.at(e, j);
        auto [t0, t1] = slab.substep_interval(e, j);
        QuadRule rule =
            prism_rule(mesh, e, t0, t1, 2 * b.index_set.quad_degree() + opts.quad_order_offset);
        Eigen::MatrixXd V, DX, DY, DT;
        b.evaluate(rule.points, &V, &DX, &DY, streamline ? &DT : nullptr);
        Eigen::MatrixXd ADX(b.size(), rule.size()), ADY(b.size(), rule.size());
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const auto& pt = rule.points[q];
          Eigen::Matrix2d a = data.a(pt[2], pt[0], pt[1]);
          ADX.col(q) = a(0, 0) * DX.col(q) + a(0, 1) * DY.col(q);
          ADY.col(q) = a(1, 0) * DX.col(q) + a(1, 1) * DY.col(q);
        }
        Eigen::MatrixXd K = apply_weights(DX, rule.weights) * ADX.transpose() +
                            apply_weights(DY, rule.weights) * ADY.transpose();
        if (streamline) {
          double lambda = (t1 - t0) / double(phat[e] * phat[e]);
          K += lambda * (apply_weights(DT, rule.weights) * DT.transpose());
        }
        for (int i = 0; i < K.rows(); ++i)
          for (int k = 0; k < K.cols(); ++k)
            if (K(i, k) != 0.0) trip.emplace_back(gdof(n, e, j, i), gdof(n, e, j, k), K(i, k));
      }
    }

    PenaltyField penalty = build_penalty_field(mesh, slab, sb, data, opts);
    for (const Face& face : mesh.faces) {
      int e1 = face.elements[0];
      int e2 = face.elements[1];
      bool interior = face.kind == FaceKind::Interior;
      double sigma = penalty.sigma[face.id];
      auto breaks = merged_breakpoints(slab, e1, e2);
      for (std::size_t sbk = 0; sbk + 1 < breaks.size(); ++sbk) {
        double s0 = breaks[sbk], s1 = breaks[sbk + 1];
        double mid = 0.5 * (s0 + s1);
        int j1 = substep_of(slab, e1, mid);
        const ElementBasis& b1 = sb.at(e1, j1);
        int qdeg = b1.index_set.quad_degree();
        const ElementBasis* b2 = nullptr;
        int j2 = 0;
        if (interior) {
          j2 = substep_of(slab, e2, mid);
          b2 = &sb.at(e2, j2);
          qdeg = std::max(qdeg, b2->index_set.quad_degree());
        }
        QuadRule rule =
            vertical_face_rule(face, mesh, s0, s1, 2 * qdeg + opts.quad_order_offset);
        Eigen::MatrixXd V1;
        b1.evaluate(rule.points, &V1, nullptr, nullptr, nullptr);
        if (!interior) {
          Eigen::MatrixXd K = sigma * (apply_weights(V1, rule.weights) * V1.transpose());
          for (int i = 0; i < K.rows(); ++i)
            for (int k = 0; k < K.cols(); ++k)
              if (K(i, k) != 0.0)
                trip.emplace_back(gdof(n, e1, j1, i), gdof(n, e1, j1, k), K(i, k));
          continue;
        }
        Eigen::MatrixXd V2;
        b2->evaluate(rule.points, &V2, nullptr, nullptr, nullptr);
        struct SideRef {
          const Eigen::MatrixXd* V;
          double sign;
          int e, j;
        };
        SideRef sides[2] = {{&V1, +1.0, e1, j1}, {&V2, -1.0, e2, j2}};
        for (const SideRef& ts : sides) {
          Eigen::MatrixXd Vw = apply_weights(*ts.V, rule.weights);
          for (const SideRef& tr : sides) {
            Eigen::MatrixXd K = sigma * ts.sign * tr.sign * (Vw * tr.V->transpose());
            for (int i = 0; i < K.rows(); ++i)
              for (int k = 0; k < K.cols(); ++k)
                if (K(i, k) != 0.0)
                  trip.emplace_back(gdof(n, ts.e, ts.j, i), gdof(n, tr.e, tr.j, k), K(i, k));
          }
        }
      }
    }
  }

  // Endpoint and node-jump terms (weights 1/2 per the dG norm).
  auto add_mass = [&](int n, int e, int j, double t, double w, int n2, int e2, int j2) {
    const ElementBasis& br = bases[n].at(e, j);
    const ElementBasis& bc = bases[n2].at(e2, j2);
    int order = std::max(br.index_set.quad_degree(), bc.index_set.quad_degree()) * 2 +
                opts.quad_order_offset;
    QuadRule hr = horizontal_face_rule(mesh, e, order, t);
    Eigen::MatrixXd Vr, Vc;
    br.evaluate(hr.points, &Vr, nullptr, nullptr, nullptr);
    bc.evaluate(hr.points, &Vc, nullptr, nullptr, nullptr);
    Eigen::MatrixXd K = w * (apply_weights(Vr, hr.weights) * Vc.transpose());
    for (int i = 0; i < K.rows(); ++i)
      for (int k = 0; k < K.cols(); ++k)
        if (K(i, k) != 0.0) trip.emplace_back(gdof(n, e, j, i), gdof(n2, e2, j2, k), K(i, k));
  };

  int N = grid.num_slabs();
  for (const auto& el : mesh.elements) {
    int e = el.id;
    add_mass(0, e, 0, 0.0, 0.5, 0, e, 0);  // (1/2)||v+_0||^2
    for (int n = 1; n < N; ++n) {
      double node = grid.slabs[n].t_start;
      int jp = grid.slabs[n - 1].substeps(e) - 1;
      add_mass(n, e, 0, node, 0.5, n, e, 0);
      add_mass(n, e, 0, node, -0.5, n - 1, e, jp);
      add_mass(n - 1, e, jp, node, -0.5, n, e, 0);
      add_mass(n - 1, e, jp, node, 0.5, n - 1, e, jp);
    }
    int jl = grid.slabs[N - 1].substeps(e) - 1;
    add_mass(N - 1, e, jl, grid.T, 0.5, N - 1, e, jl);  // (1/2)||v-_T||^2
  }

  SparseRM G(total, total);
  G.setFromTriplets(trip.begin(), trip.end());
  return G;
}

}  // namespace

SparseRM dg_norm_gram(const SpatialMesh& mesh, const TimeGrid& grid,
                      const std::vector<SlabBases>& bases, const ProblemData& data,
                      const AssemblyOptions& opts) {
  return norm_gram(mesh, grid, bases, data, opts, false);
}

SparseRM sd_norm_gram(const SpatialMesh& mesh, const TimeGrid& grid,
                      const std::vector<SlabBases>& bases, const ProblemData& data,
                      const AssemblyOptions& opts) {
  return norm_gram(mesh, grid, bases, data, opts, true);
}

double infsup_estimate(const SpatialMesh& mesh, const TimeGrid& grid, const BasisSpec& spec,
                       const ProblemData& data, const InfSupOptions& opts) {
  std::vector<SlabBases> bases = build_bases(mesh, grid, spec, opts.assembly);
  long total = 0;
  for (const auto& sb : bases)
    total += build_dof_map(sb).total;
  if (total > opts.cap)
    throw Error("infsup diagnostic refused: " + std::to_string(total) + " dofs exceed cap " +
                std::to_string(opts.cap));

  GlobalSystem sys = assemble_global(mesh, grid, bases, data, opts.assembly);
  Eigen::MatrixXd B = Eigen::MatrixXd(sys.matrix);
  Eigen::MatrixXd G = Eigen::MatrixXd(sd_norm_gram(mesh, grid, bases, data, opts.assembly));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()));
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw Error("infsup diagnostic: norm Gram matrix not positive definite");
  Eigen::VectorXd lam = es.eigenvalues().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd Gmh = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();

  Eigen::MatrixXd S = Gmh * B * Gmh;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
  return svd.singularValues().minCoeff();
}

}  // namespace stdg
