#include "stdg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/SparseLU>

#include "stdg/errors.hpp"

namespace stdg {

namespace {

using SparseRM = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Element-block Jacobi preconditioner over the dof-map blocks.
class BlockJacobi {
 public:
  BlockJacobi(const SparseRM& A, const DofMap& dof) {
    for (std::size_t e = 0; e < dof.offset.size(); ++e) {
      for (std::size_t j = 0; j < dof.offset[e].size(); ++j) {
        int off = dof.offset[e][j];
        int m = dof.block_size[e][j];
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m, m);
        for (int r = 0; r < m; ++r)
          for (SparseRM::InnerIterator it(A, off + r); it; ++it)
            if (it.col() >= off && it.col() < off + m)
              block(r, int(it.col()) - off) = it.value();
        offsets_.push_back(off);
        lus_.emplace_back(block);
      }
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(v.size());
    for (std::size_t b = 0; b < lus_.size(); ++b) {
      int off = offsets_[b];
      int m = int(lus_[b].rows());
      out.segment(off, m) = lus_[b].solve(v.segment(off, m));
    }
    return out;
  }

 private:
  std::vector<int> offsets_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lus_;
};

Eigen::VectorXd gmres(const SparseRM& A, const Eigen::VectorXd& b, const BlockJacobi& P,
                      const SolverOptions& opts) {
  const int n = int(A.rows());
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  int total_iters = 0;

  while (true) {
    Eigen::VectorXd r = b - A * x;
    double beta = r.norm();
    if (beta <= opts.tol * bnorm) return x;
    if (total_iters >= opts.max_iters) {
      char msg[128];
      std::snprintf(msg, sizeof(msg), "gmres: no convergence after %d iterations, residual %.3e",
                    total_iters, beta / bnorm);
      throw SolverError(msg);
    }

    int m = std::min(opts.restart, opts.max_iters - total_iters);
    std::vector<Eigen::VectorXd> V;
    V.reserve(m + 1);
    V.push_back(r / beta);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    std::vector<double> cs(m), sn(m);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    g(0) = beta;
    int k = 0;
    for (; k < m; ++k) {
      ++total_iters;
      Eigen::VectorXd w = A * P.apply(V[k]);
      for (int i = 0; i <= k; ++i) {
        H(i, k) = V[i].dot(w);
        w -= H(i, k) * V[i];
      }
      H(k + 1, k) = w.norm();
      bool breakdown = H(k + 1, k) < 1e-300;
      if (!breakdown) V.push_back(w / H(k + 1, k));

      for (int i = 0; i < k; ++i) {
        double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      double d = std::hypot(H(k, k), H(k + 1, k));
      cs[k] = H(k, k) / d;
      sn[k] = H(k + 1, k) / d;
      H(k, k) = d;
      H(k + 1, k) = 0.0;
      g(k + 1) = -sn[k] * g(k);
      g(k) = cs[k] * g(k);
      if (std::abs(g(k + 1)) <= opts.tol * bnorm || breakdown) {
        ++k;
        break;
      }
    }
    Eigen::VectorXd y =
        H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) z += y(i) * V[i];
    x += P.apply(z);
  }
}

}  // namespace

Eigen::VectorXd solve_slab(const SlabSystem& system, const SolverOptions& opts) {
  const int n = int(system.matrix.rows());
  const double bnorm = system.rhs.norm();
  if (bnorm == 0.0) return Eigen::VectorXd::Zero(n);

  Eigen::VectorXd x;
  if (n <= opts.direct_threshold) {
    Eigen::SparseMatrix<double> A = system.matrix;  // column-major for SparseLU
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw SolverError("solve_slab: singular factorization");
    x = lu.solve(system.rhs);
    // Iterative refinement until the advertised residual bound holds.
    for (int pass = 0; pass < 3; ++pass) {
      Eigen::VectorXd r = system.rhs - system.matrix * x;
      if (r.norm() <= opts.tol * bnorm) break;
      x += lu.solve(r);
    }
  } else {
    BlockJacobi precond(system.matrix, system.dof_map);
    x = gmres(system.matrix, system.rhs, precond, opts);
  }

  double res = (system.rhs - system.matrix * x).norm();
  if (!(res <= opts.tol * bnorm)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg), "solve_slab: residual %.3e exceeds tolerance %.1e",
                  res / bnorm, opts.tol);
    throw SolverError(msg);
  }
  return x;
}

int DiscreteSolution::locate_substep(int slab, int element, double t, Side side) const {
  const TimeSlab& s = grid.slabs[slab];
  const auto* bp = s.breakpoints(element);
  if (!bp) return 0;
  double tol = 1e-12 * std::max(1.0, grid.T);
  for (std::size_t j = 0; j + 1 < bp->size(); ++j) {
    double lo = (*bp)[j], hi = (*bp)[j + 1];
    bool in = (side == Side::Minus) ? (t > lo + tol && t <= hi + tol)
                                    : (t >= lo - tol && t < hi - tol);
    if (in) return int(j);
  }
  return (side == Side::Minus) ? int(bp->size()) - 2 : 0;
}

double DiscreteSolution::eval_element(int slab, int element, int substep, double x, double y,
                                      double t) const {
  const SlabSolution& s = slabs[slab];
  const ElementBasis& b = s.bases.at(element, substep);
  Eigen::VectorXd val;
  b.evaluate_point(x, y, t, &val, nullptr, nullptr, nullptr);
  int off = s.dof_map(element, substep, 0);
  return s.coeffs.segment(off, b.size()).dot(val);
}

std::pair<double, Eigen::Vector2d> DiscreteSolution::eval_element_with_gradient(
    int slab, int element, int substep, double x, double y, double t) const {
  const SlabSolution& s = slabs[slab];
  const ElementBasis& b = s.bases.at(element, substep);
  Eigen::VectorXd val, dx, dy;
  b.evaluate_point(x, y, t, &val, &dx, &dy, nullptr);
  int off = s.dof_map(element, substep, 0);
  auto c = s.coeffs.segment(off, b.size());
  return {c.dot(val), Eigen::Vector2d(c.dot(dx), c.dot(dy))};
}

double DiscreteSolution::evaluate(double x, double y, double t, Side side) const {
  return evaluate_with_gradient(x, y, t, side).first;
}

std::pair<double, Eigen::Vector2d> DiscreteSolution::evaluate_with_gradient(
    double x, double y, double t, Side side) const {
  int n = grid.locate(t, side == Side::Minus);
  if (n < 0) throw LocationError("time " + std::to_string(t) + " outside (0,T)");
  int e = mesh->locate(x, y);
  if (e < 0)
    throw LocationError("point (" + std::to_string(x) + "," + std::to_string(y) +
                        ") outside the spatial domain");
  int j = locate_substep(n, e, t, side);
  return eval_element_with_gradient(n, e, j, x, y, t);
}

DiscreteSolution march(const SpatialMesh& mesh, const TimeGrid& grid, const BasisSpec& spec,
                       const ProblemData& data, const MarchOptions& opts) {
  DiscreteSolution sol;
  sol.mesh = &mesh;
  sol.grid = grid;
  sol.slabs.reserve(grid.num_slabs());

  ElementTrace trace = [&data](int, double x, double y) { return data.u0(x, y); };

  for (int n = 0; n < grid.num_slabs(); ++n) {
    SlabSolution slab;
    slab.bases = build_slab_bases(mesh, grid.slabs[n], spec, opts.assembly);
    try {
      SlabSystem sys =
          assemble_slab(mesh, grid, n, slab.bases, data, trace, opts.assembly);
      slab.dof_map = sys.dof_map;
      slab.coeffs = solve_slab(sys, opts.solver);
    } catch (const SolverError& err) {
      throw SolverError("slab " + std::to_string(n) + ": " + err.what());
    }
    sol.slabs.push_back(std::move(slab));

    double t_end = grid.slabs[n].t_end;
    trace = [&sol, n, t_end](int element, double x, double y) {
      int j = sol.grid.slabs[n].substeps(element) - 1;
      return sol.eval_element(n, element, j, x, y, t_end);
    };
  }
  return sol;
}

}  // namespace stdg
