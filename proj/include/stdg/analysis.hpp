#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stdg/solver.hpp"

namespace stdg {

// Error norms of u - u_h against a reference solution. e_L2H1 is the broken
// gradient seminorm of L2(J;H1(Omega,T)); e_L2H1_full adds the L2 part.
// e_LinfL2 is sampled at slab nodes (minus side) and temporal quadrature
// points, a lower bound of the true sup.
struct ErrorReport {
  double e_L2L2 = 0.0;
  double e_L2H1 = 0.0;
  double e_L2H1_full = 0.0;
  double e_LinfL2 = 0.0;
  double dg_norm_of_error = 0.0;
  long dofs = 0;
  double h_max = 0.0;
  double tau_max = 0.0;
};

// quad_order < 0 selects the default 2p+4 per element. The penalty weights
// inside the dG norm are rebuilt from `opts`, which must match the solve.
ErrorReport error_norms(const DiscreteSolution& solution, const ExactSolution& exact,
                        const ProblemData& data, const AssemblyOptions& opts,
                        int quad_order = -1);

struct ConvergenceRow {
  int level = 0;
  double h_max = 0.0;
  double tau_max = 0.0;
  long dofs = 0;
  double e_L2L2 = 0.0;
  double e_L2H1 = 0.0;
  double e_LinfL2 = 0.0;
  double dg_norm = 0.0;
  double e_L2H1_full = 0.0;
  std::optional<double> eoc_L2L2, eoc_L2H1, eoc_LinfL2;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  // Header: level,h_max,tau_max,dofs,e_L2L2,eoc_L2L2,e_L2H1,eoc_L2H1,
  //         e_LinfL2,eoc_LinfL2,dg_norm,e_L2H1_full
  std::string to_csv() const;
};

// Fills per-norm EOC entries: EOC_k = log(e_{k-1}/e_k)/log(h_{k-1}/h_k).
// Requires >= 2 rows with strictly decreasing h.
ConvergenceTable eoc(std::vector<ConvergenceRow> rows);

ConvergenceRow make_row(int level, const ErrorReport& report);

// Gram matrix of the dG norm: integral of |v|_d^2 over J plus the weighted
// endpoint/jump terms at the slab nodes.
Eigen::SparseMatrix<double, Eigen::RowMajor> dg_norm_gram(
    const SpatialMesh& mesh, const TimeGrid& grid, const std::vector<SlabBases>& bases,
    const ProblemData& data, const AssemblyOptions& opts);

// Gram matrix of the streamline-diffusion norm: dG Gram plus
// lambda * ||dv/dt||^2 per space-time element, lambda = tau/(phat^2) with
// phat the max degree over the element's vertical-face neighbours.
Eigen::SparseMatrix<double, Eigen::RowMajor> sd_norm_gram(
    const SpatialMesh& mesh, const TimeGrid& grid, const std::vector<SlabBases>& bases,
    const ProblemData& data, const AssemblyOptions& opts);

struct InfSupOptions {
  int cap = 5000;  // refuse the dense diagnostic above this many dofs
  AssemblyOptions assembly;
};

// Dense small-instance diagnostic: min over v of max over w of
// B(v,w)/(|||v|||_s |||w|||_s), computed as the smallest singular value of
// G^{-1/2} B G^{-1/2}.
double infsup_estimate(const SpatialMesh& mesh, const TimeGrid& grid, const BasisSpec& spec,
                       const ProblemData& data, const InfSupOptions& opts);

}  // namespace stdg
