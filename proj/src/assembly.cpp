#include "stdg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stdg/errors.hpp"
#include "stdg/parallel.hpp"

namespace stdg {

namespace {

using Triplet = Eigen::Triplet<double>;

int substep_of(const TimeSlab& slab, int element, double t) {
  const auto* bp = slab.breakpoints(element);
  if (!bp) return 0;
  for (std::size_t j = 0; j + 1 < bp->size(); ++j)
    if (t < (*bp)[j + 1] || j + 2 == bp->size()) return int(j);
  return 0;
}

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

// Weighted-value matrix X * diag(w).
Eigen::MatrixXd apply_weights(const Eigen::MatrixXd& X, const std::vector<double>& w) {
  Eigen::MatrixXd Xw = X;
  for (int q = 0; q < Xw.cols(); ++q) Xw.col(q) *= w[q];
  return Xw;
}

void check_tensor(const Eigen::Matrix2d& a, double theta, double t, double x, double y) {
  double scale = a.cwiseAbs().maxCoeff();
  if (std::abs(a(0, 1) - a(1, 0)) > 1e-12 * std::max(1.0, scale))
    throw AssemblyError("diffusion tensor not symmetric at t=" + std::to_string(t) + ", x=" +
                        std::to_string(x) + ", y=" + std::to_string(y));
  double tr = a(0, 0) + a(1, 1);
  double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  double lmin = 0.5 * tr - disc;
  if (lmin < theta * (1.0 - 1e-8))
    throw AssemblyError("ellipticity violated: min eigenvalue " + std::to_string(lmin) +
                        " < theta=" + std::to_string(theta));
}

double spectral_norm2x2(const Eigen::Matrix2d& a) {
  double tr = a(0, 0) + a(1, 1);
  double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  return std::max(std::abs(0.5 * tr + disc), std::abs(0.5 * tr - disc));
}

void append_block(std::vector<Triplet>& trip, const Eigen::MatrixXd& block, int row0,
                  int col0) {
  for (int i = 0; i < block.rows(); ++i)
    for (int k = 0; k < block.cols(); ++k)
      if (block(i, k) != 0.0) trip.emplace_back(row0 + i, col0 + k, block(i, k));
}

struct ElementContrib {
  std::vector<Triplet> temporal;
  std::vector<Triplet> spatial;
  std::vector<std::pair<int, double>> rhs;
  std::vector<double> abar;  // per substep
};

struct FaceContrib {
  std::vector<Triplet> spatial;
  std::vector<std::pair<int, double>> rhs;
};

// Face penalty from the per-space-time-element diffusion bounds:
// C_sigma * max over incident (element, substep) of abar^2 (p+1)(p+2)/h.
double face_sigma(const Face& face, const SpatialMesh& mesh, const TimeSlab& slab,
                  const SlabBases& bases, double C_sigma,
                  const std::function<double(int, int)>& abar) {
  double s = 0.0;
  for (int e : face.elements) {
    if (e < 0) continue;
    double h = mesh.elements[e].h;
    for (int j = 0; j < slab.substeps(e); ++j) {
      int p = bases.at(e, j).index_set.p;
      double ab = abar(e, j);
      s = std::max(s, ab * ab * (p + 1) * (p + 2) / h);
    }
  }
  return C_sigma * s;
}

}  // namespace

SlabBases build_slab_bases(const SpatialMesh& mesh, const TimeSlab& slab,
                           const BasisSpec& spec, const AssemblyOptions& opts) {
  SlabBases out;
  out.bases.resize(mesh.elements.size());
  parallel_for(mesh.elements.size(), opts.threads, [&](std::size_t e) {
    int eid = int(e);
    int p = spec.degrees.degree(slab.index, eid);
    IndexSet set{spec.kind, p};
    auto bb = mesh.element_bbox(eid);
    int S = slab.substeps(eid);
    out.bases[e].reserve(S);
    for (int j = 0; j < S; ++j) {
      auto [t0, t1] = slab.substep_interval(eid, j);
      PrismBox box{bb[0], bb[1], bb[2], bb[3], t0, t1};
      QuadRule rule =
          prism_rule(mesh, eid, t0, t1, 2 * set.quad_degree() + opts.quad_order_offset);
      out.bases[e].push_back(orthonormalize(set, eid, j, box, rule));
    }
  });
  return out;
}

std::vector<SlabBases> build_bases(const SpatialMesh& mesh, const TimeGrid& grid,
                                   const BasisSpec& spec, const AssemblyOptions& opts) {
  std::vector<SlabBases> out;
  out.reserve(grid.num_slabs());
  for (const TimeSlab& slab : grid.slabs)
    out.push_back(build_slab_bases(mesh, slab, spec, opts));
  return out;
}

DofMap build_dof_map(const SlabBases& bases) {
  DofMap dof;
  dof.offset.resize(bases.bases.size());
  dof.block_size.resize(bases.bases.size());
  int next = 0;
  for (std::size_t e = 0; e < bases.bases.size(); ++e) {
    for (const ElementBasis& b : bases.bases[e]) {
      dof.offset[e].push_back(next);
      dof.block_size[e].push_back(b.size());
      next += b.size();
    }
  }
  dof.total = next;
  return dof;
}

double diffusion_sup(const SpatialMesh& mesh, int element, double t0, double t1, int order,
                     const ProblemData& data) {
  QuadRule rule = prism_rule(mesh, element, t0, t1, order);
  double abar = 0.0;
  for (const auto& pt : rule.points) {
    Eigen::Matrix2d a = data.a(pt[2], pt[0], pt[1]);
    check_tensor(a, data.theta, pt[2], pt[0], pt[1]);
    abar = std::max(abar, spectral_norm2x2(a));
  }
  return abar;
}

double penalty_value(const Face& face, const SpatialMesh& mesh, const TimeSlab& slab,
                     const SlabBases& bases, const ProblemData& data,
                     const AssemblyOptions& opts) {
  auto abar = [&](int e, int j) {
    const ElementBasis& b = bases.at(e, j);
    auto [t0, t1] = slab.substep_interval(e, j);
    return diffusion_sup(mesh, e, t0, t1,
                         2 * b.index_set.quad_degree() + opts.quad_order_offset, data);
  };
  return face_sigma(face, mesh, slab, bases, opts.C_sigma, abar);
}

PenaltyField build_penalty_field(const SpatialMesh& mesh, const TimeSlab& slab,
                                 const SlabBases& bases, const ProblemData& data,
                                 const AssemblyOptions& opts) {
  PenaltyField field;
  field.C_sigma = opts.C_sigma;
  field.sigma.resize(mesh.faces.size(), 0.0);
  // abar per space-time element, computed once.
  std::vector<std::vector<double>> abar(mesh.elements.size());
  parallel_for(mesh.elements.size(), opts.threads, [&](std::size_t e) {
    int eid = int(e);
    int S = slab.substeps(eid);
    abar[e].resize(S);
    for (int j = 0; j < S; ++j) {
      auto [t0, t1] = slab.substep_interval(eid, j);
      abar[e][j] = diffusion_sup(
          mesh, eid, t0, t1,
          2 * bases.at(eid, j).index_set.quad_degree() + opts.quad_order_offset, data);
    }
  });
  auto lookup = [&abar](int e, int j) { return abar[e][j]; };
  for (const Face& f : mesh.faces) {
    field.sigma[f.id] = face_sigma(f, mesh, slab, bases, opts.C_sigma, lookup);
    if (!(field.sigma[f.id] > 0.0))
      throw AssemblyError("penalty invariant violated on face " + std::to_string(f.id));
  }
  return field;
}

TimeJumpBlocks assemble_time_jump_terms(const SpatialMesh& mesh, int element,
                                        const TimeSlab& slab,
                                        const std::vector<ElementBasis>& element_bases,
                                        const AssemblyOptions& opts) {
  TimeJumpBlocks blocks;
  int S = slab.substeps(element);
  for (int j = 1; j < S; ++j) {
    const ElementBasis& cur = element_bases[j];
    const ElementBasis& prev = element_bases[j - 1];
    auto [t0, t1] = slab.substep_interval(element, j);
    (void)t1;
    int order = 2 * std::max(cur.index_set.quad_degree(), prev.index_set.quad_degree()) +
                opts.quad_order_offset;
    QuadRule hr = horizontal_face_rule(mesh, element, order, t0);
    Eigen::MatrixXd Vp, Vm;
    cur.evaluate(hr.points, &Vp, nullptr, nullptr, nullptr);
    prev.evaluate(hr.points, &Vm, nullptr, nullptr, nullptr);
    Eigen::MatrixXd Vpw = apply_weights(Vp, hr.weights);
    blocks.diag.push_back(Vpw * Vp.transpose());
    blocks.coupling.push_back(-(Vpw * Vm.transpose()));
  }
  return blocks;
}

SlabSystem assemble_slab(const SpatialMesh& mesh, const TimeGrid& grid, int slab_index,
                         const SlabBases& bases, const ProblemData& data,
                         const ElementTrace& prev_trace, const AssemblyOptions& opts) {
  if (mesh.sub_triangulation.per_element.size() != mesh.elements.size())
    throw AssemblyError("missing sub-triangulation");
  const TimeSlab& slab = grid.slabs.at(slab_index);

  SlabSystem sys;
  sys.dof_map = build_dof_map(bases);
  const DofMap& dof = sys.dof_map;

  std::vector<ElementContrib> elem(mesh.elements.size());
  parallel_for(mesh.elements.size(), opts.threads, [&](std::size_t ei) {
    int e = int(ei);
    ElementContrib& out = elem[ei];
    int S = slab.substeps(e);
    out.abar.resize(S);
    for (int j = 0; j < S; ++j) {
      const ElementBasis& basis = bases.at(e, j);
      int m = basis.size();
      auto [t0, t1] = slab.substep_interval(e, j);
      int order = 2 * basis.index_set.quad_degree() + opts.quad_order_offset;

      QuadRule rule = prism_rule(mesh, e, t0, t1, order);
      Eigen::MatrixXd V, DX, DY, DT;
      basis.evaluate(rule.points, &V, &DX, &DY, &DT);

      // Diffusion applied to trial gradients, point by point.
      Eigen::MatrixXd ADX(m, rule.size()), ADY(m, rule.size());
      double abar = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto& pt = rule.points[q];
        Eigen::Matrix2d a = data.a(pt[2], pt[0], pt[1]);
        check_tensor(a, data.theta, pt[2], pt[0], pt[1]);
        abar = std::max(abar, spectral_norm2x2(a));
        ADX.col(q) = a(0, 0) * DX.col(q) + a(0, 1) * DY.col(q);
        ADY.col(q) = a(1, 0) * DX.col(q) + a(1, 1) * DY.col(q);
      }
      out.abar[j] = abar;

      Eigen::MatrixXd Vw = apply_weights(V, rule.weights);
      Eigen::MatrixXd DXw = apply_weights(DX, rule.weights);
      Eigen::MatrixXd DYw = apply_weights(DY, rule.weights);
      Eigen::MatrixXd Ktime = Vw * DT.transpose();
      Eigen::MatrixXd Kspace = DXw * ADX.transpose() + DYw * ADY.transpose();
      append_block(out.temporal, Ktime, dof(e, j, 0), dof(e, j, 0));
      append_block(out.spatial, Kspace, dof(e, j, 0), dof(e, j, 0));

      // Load term; graded time rule on a sub-step touching a data
      // singularity at t=0.
      int order_data = order + opts.data_order_offset;
      bool graded = data.f_time_alpha.has_value() && t0 == 0.0;
      QuadRule drule_own;
      const QuadRule* drule = &rule;
      Eigen::MatrixXd Vd_own;
      const Eigen::MatrixXd* Vd = &V;
      if (graded || opts.data_order_offset > 0) {
        drule_own = graded ? graded_prism_rule(mesh, e, t1, order_data)
                           : prism_rule(mesh, e, t0, t1, order_data);
        drule = &drule_own;
        basis.evaluate(drule->points, &Vd_own, nullptr, nullptr, nullptr);
        Vd = &Vd_own;
      }
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t q = 0; q < drule->size(); ++q)
          s += drule->weights[q] * data.f(drule->points[q][2], drule->points[q][0],
                                          drule->points[q][1]) *
               (*Vd)(i, q);
        out.rhs.emplace_back(dof(e, j, i), s);
      }
    }

    // (U+, V+) at the slab start plus the previous-trace load.
    {
      const ElementBasis& basis = bases.at(e, 0);
      int m = basis.size();
      QuadRule hr = horizontal_face_rule(
          mesh, e,
          2 * basis.index_set.quad_degree() + opts.quad_order_offset + opts.data_order_offset,
          slab.t_start);
      Eigen::MatrixXd V0;
      basis.evaluate(hr.points, &V0, nullptr, nullptr, nullptr);
      Eigen::MatrixXd V0w = apply_weights(V0, hr.weights);
      append_block(out.temporal, V0w * V0.transpose(), dof(e, 0, 0), dof(e, 0, 0));
      for (int i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t q = 0; q < hr.size(); ++q)
          s += hr.weights[q] * prev_trace(e, hr.points[q][0], hr.points[q][1]) * V0(i, q);
        out.rhs.emplace_back(dof(e, 0, i), s);
      }
    }

    // Jumps across interior local time nodes.
    TimeJumpBlocks tj = assemble_time_jump_terms(mesh, e, slab, bases.bases[ei], opts);
    for (std::size_t k = 0; k < tj.diag.size(); ++k) {
      int j = int(k) + 1;
      append_block(out.temporal, tj.diag[k], dof(e, j, 0), dof(e, j, 0));
      append_block(out.temporal, tj.coupling[k], dof(e, j, 0), dof(e, j - 1, 0));
    }
  });

  // Penalty needs abar of every incident space-time element; reuse the
  // values measured during the volume pass.
  PenaltyField penalty;
  penalty.C_sigma = opts.C_sigma;
  penalty.sigma.resize(mesh.faces.size(), 0.0);
  auto lookup = [&elem](int e, int j) { return elem[e].abar[j]; };
  for (const Face& f : mesh.faces) {
    penalty.sigma[f.id] = face_sigma(f, mesh, slab, bases, opts.C_sigma, lookup);
    if (!(penalty.sigma[f.id] > 0.0))
      throw AssemblyError("penalty invariant violated on face " + std::to_string(f.id));
  }

  std::vector<FaceContrib> facec(mesh.faces.size());
  parallel_for(mesh.faces.size(), opts.threads, [&](std::size_t fi) {
    const Face& face = mesh.faces[fi];
    FaceContrib& out = facec[fi];
    int e1 = face.elements[0];
    int e2 = face.elements[1];
    double sigma = penalty.sigma[face.id];
    bool interior = face.kind == FaceKind::Interior;

    std::vector<double> breaks = merged_breakpoints(slab, e1, e2);
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
      double s0 = breaks[s], s1 = breaks[s + 1];
      double mid = 0.5 * (s0 + s1);
      int j1 = substep_of(slab, e1, mid);
      const ElementBasis& b1 = bases.at(e1, j1);
      int qdeg = b1.index_set.quad_degree();
      const ElementBasis* b2 = nullptr;
      int j2 = 0;
      if (interior) {
        j2 = substep_of(slab, e2, mid);
        b2 = &bases.at(e2, j2);
        qdeg = std::max(qdeg, b2->index_set.quad_degree());
      }
      int order = 2 * qdeg + opts.quad_order_offset +
                  (interior ? 0 : opts.data_order_offset);
      QuadRule rule = vertical_face_rule(face, mesh, s0, s1, order);
      std::size_t Q = rule.size();

      auto conormal = [&](const ElementBasis& b, Eigen::MatrixXd& V, Eigen::MatrixXd& C) {
        Eigen::MatrixXd DX, DY;
        b.evaluate(rule.points, &V, &DX, &DY, nullptr);
        C.resize(b.size(), Q);
        for (std::size_t q = 0; q < Q; ++q) {
          const auto& pt = rule.points[q];
          Eigen::Matrix2d a = data.a(pt[2], pt[0], pt[1]);
          Eigen::Vector2d an = a * Eigen::Vector2d(face.normal.x, face.normal.y);
          C.col(q) = an(0) * DX.col(q) + an(1) * DY.col(q);
        }
      };

      Eigen::MatrixXd V1, C1;
      conormal(b1, V1, C1);

      if (!interior) {
        Eigen::MatrixXd V1w = apply_weights(V1, rule.weights);
        Eigen::MatrixXd C1w = apply_weights(C1, rule.weights);
        Eigen::MatrixXd K = -(V1w * C1.transpose()) - (C1w * V1.transpose()) +
                            sigma * (V1w * V1.transpose());
        append_block(out.spatial, K, dof(e1, j1, 0), dof(e1, j1, 0));
        for (int i = 0; i < b1.size(); ++i) {
          double acc = 0.0;
          for (std::size_t q = 0; q < Q; ++q) {
            double g = data.g_D(rule.points[q][2], rule.points[q][0], rule.points[q][1]);
            acc += rule.weights[q] * g * (-C1(i, q) + sigma * V1(i, q));
          }
          out.rhs.emplace_back(dof(e1, j1, i), acc);
        }
        continue;
      }

      Eigen::MatrixXd V2, C2;
      conormal(*b2, V2, C2);

      struct Side {
        const Eigen::MatrixXd *V, *C;
        double sign;
        int elem, sub;
      };
      Side sides[2] = {{&V1, &C1, +1.0, e1, j1}, {&V2, &C2, -1.0, e2, j2}};
      for (const Side& ts : sides) {    // test side (rows)
        Eigen::MatrixXd Vw = apply_weights(*ts.V, rule.weights);
        Eigen::MatrixXd Cw = apply_weights(*ts.C, rule.weights);
        for (const Side& tr : sides) {  // trial side (columns)
          Eigen::MatrixXd K = -0.5 * ts.sign * (Vw * tr.C->transpose()) -
                              0.5 * tr.sign * (Cw * tr.V->transpose()) +
                              sigma * ts.sign * tr.sign * (Vw * tr.V->transpose());
          append_block(out.spatial, K, dof(ts.elem, ts.sub, 0), dof(tr.elem, tr.sub, 0));
        }
      }
    }
  });

  // Deterministic merge: elements in index order, then faces.
  std::vector<Triplet> trip_all, trip_spatial;
  sys.rhs = Eigen::VectorXd::Zero(dof.total);
  for (const ElementContrib& c : elem) {
    trip_all.insert(trip_all.end(), c.temporal.begin(), c.temporal.end());
    trip_all.insert(trip_all.end(), c.spatial.begin(), c.spatial.end());
    trip_spatial.insert(trip_spatial.end(), c.spatial.begin(), c.spatial.end());
    for (const auto& [i, v] : c.rhs) sys.rhs[i] += v;
  }
  for (const FaceContrib& c : facec) {
    trip_all.insert(trip_all.end(), c.spatial.begin(), c.spatial.end());
    trip_spatial.insert(trip_spatial.end(), c.spatial.begin(), c.spatial.end());
    for (const auto& [i, v] : c.rhs) sys.rhs[i] += v;
  }
  sys.matrix.resize(dof.total, dof.total);
  sys.matrix.setFromTriplets(trip_all.begin(), trip_all.end());
  sys.spatial.resize(dof.total, dof.total);
  sys.spatial.setFromTriplets(trip_spatial.begin(), trip_spatial.end());
  return sys;
}

GlobalSystem assemble_global(const SpatialMesh& mesh, const TimeGrid& grid,
                             const std::vector<SlabBases>& bases, const ProblemData& data,
                             const AssemblyOptions& opts) {
  GlobalSystem sys;
  int offset = 0;
  std::vector<SlabSystem> slabs;
  auto zero_trace = [](int, double, double) { return 0.0; };
  for (int n = 0; n < grid.num_slabs(); ++n) {
    SlabSystem s = assemble_slab(mesh, grid, n, bases[n], data, zero_trace, opts);
    sys.slab_offset.push_back(offset);
    offset += s.dof_map.total;
    sys.slab_dofs.push_back(s.dof_map);
    slabs.push_back(std::move(s));
  }
  sys.total = offset;

  std::vector<Triplet> trip;
  for (int n = 0; n < grid.num_slabs(); ++n) {
    for (int k = 0; k < slabs[n].matrix.outerSize(); ++k)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(slabs[n].matrix, k);
           it; ++it)
        trip.emplace_back(sys.slab_offset[n] + int(it.row()),
                          sys.slab_offset[n] + int(it.col()), it.value());
    if (n == 0) continue;
    // -(u-_{n-1}, v+_{n-1}) ties the first sub-step of slab n to the last
    // sub-step of slab n-1, element by element.
    const TimeSlab& prev_slab = grid.slabs[n - 1];
    double node = prev_slab.t_end;
    for (const auto& el : mesh.elements) {
      int e = el.id;
      const ElementBasis& cur = bases[n].at(e, 0);
      int jprev = prev_slab.substeps(e) - 1;
      const ElementBasis& prev = bases[n - 1].at(e, jprev);
      int order = 2 * std::max(cur.index_set.quad_degree(), prev.index_set.quad_degree()) +
                  opts.quad_order_offset;
      QuadRule hr = horizontal_face_rule(mesh, e, order, node);
      Eigen::MatrixXd Vc, Vp;
      cur.evaluate(hr.points, &Vc, nullptr, nullptr, nullptr);
      prev.evaluate(hr.points, &Vp, nullptr, nullptr, nullptr);
      Eigen::MatrixXd K = -(apply_weights(Vc, hr.weights) * Vp.transpose());
      int row0 = sys.dof(n, e, 0, 0);
      int col0 = sys.dof(n - 1, e, jprev, 0);
      for (int i = 0; i < K.rows(); ++i)
        for (int k2 = 0; k2 < K.cols(); ++k2)
          if (K(i, k2) != 0.0) trip.emplace_back(row0 + i, col0 + k2, K(i, k2));
    }
  }
  sys.matrix.resize(sys.total, sys.total);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

}  // namespace stdg
