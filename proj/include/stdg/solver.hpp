#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stdg/assembly.hpp"

namespace stdg {

struct SolverOptions {
  double tol = 1e-12;            // relative residual
  int direct_threshold = 200000; // sparse LU below this many unknowns
  int max_iters = 2000;          // total GMRES iterations
  int restart = 100;             // GMRES restart length
};

// Solves the slab system to ||Ax-b|| <= tol*||b||; sparse direct
// factorization below the size threshold, otherwise restarted GMRES with
// element-block Jacobi preconditioning. The residual is replayed on the
// assembled matrix independently of the method.
Eigen::VectorXd solve_slab(const SlabSystem& system, const SolverOptions& opts);

enum class Side { Minus, Plus };

struct SlabSolution {
  SlabBases bases;
  DofMap dof_map;
  Eigen::VectorXd coeffs;
};

// Space-time dG solution: per-slab coefficient vectors plus the bases and
// dof maps needed to evaluate them. Evaluation at a slab node yields two
// one-sided values, selected by `Side`.
struct DiscreteSolution {
  const SpatialMesh* mesh = nullptr;
  TimeGrid grid;
  std::vector<SlabSolution> slabs;

  long total_dofs() const {
    long n = 0;
    for (const auto& s : slabs) n += s.dof_map.total;
    return n;
  }

  // Expansion value (and spatial gradient) on a known element/substep.
  double eval_element(int slab, int element, int substep, double x, double y,
                      double t) const;
  std::pair<double, Eigen::Vector2d> eval_element_with_gradient(int slab, int element,
                                                                int substep, double x,
                                                                double y, double t) const;

  // Point evaluation with slab/element/substep location; throws
  // LocationError outside the domain.
  double evaluate(double x, double y, double t, Side side = Side::Minus) const;
  std::pair<double, Eigen::Vector2d> evaluate_with_gradient(double x, double y, double t,
                                                            Side side = Side::Minus) const;

  // Substep index containing time t within a slab, honoring the side at
  // breakpoints.
  int locate_substep(int slab, int element, double t, Side side) const;
};

struct MarchOptions {
  AssemblyOptions assembly;
  SolverOptions solver;
};

// Sequential slab solves; slab n is loaded with the trace of slab n-1 at its
// start (u0 for the first slab).
DiscreteSolution march(const SpatialMesh& mesh, const TimeGrid& grid, const BasisSpec& spec,
                       const ProblemData& data, const MarchOptions& opts = {});

}  // namespace stdg
