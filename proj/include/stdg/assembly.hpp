#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "stdg/basis.hpp"
#include "stdg/mesh.hpp"
#include "stdg/problem.hpp"
#include "stdg/timegrid.hpp"

namespace stdg {

// Polynomial degree per space-time element. Per-slab entries override the
// uniform degree; per-element entries override both.
struct DegreeSpec {
  int uniform_p = 1;
  std::optional<std::vector<int>> per_slab;
  std::optional<std::map<int, int>> per_element;

  int degree(int slab, int element) const {
    if (per_element) {
      auto it = per_element->find(element);
      if (it != per_element->end()) return it->second;
    }
    if (per_slab && slab >= 0 && slab < int(per_slab->size())) return (*per_slab)[slab];
    return uniform_p;
  }
};

struct BasisSpec {
  IndexSetKind kind = IndexSetKind::TotalDegree;
  DegreeSpec degrees;
};

struct AssemblyOptions {
  double C_sigma = 10.0;
  int quad_order_offset = 2;   // bilinear-form rules use order 2p + offset
  int data_order_offset = 0;   // extra order for data terms (f, g_D, traces)
  int threads = 0;             // 0 = resolve from STDG_THREADS
};

// Orthonormal bases of one slab, indexed [element][substep].
struct SlabBases {
  std::vector<std::vector<ElementBasis>> bases;
  const ElementBasis& at(int element, int substep) const { return bases[element][substep]; }
};

SlabBases build_slab_bases(const SpatialMesh& mesh, const TimeSlab& slab,
                           const BasisSpec& spec, const AssemblyOptions& opts);

// Bases for every slab of the grid.
std::vector<SlabBases> build_bases(const SpatialMesh& mesh, const TimeGrid& grid,
                                   const BasisSpec& spec, const AssemblyOptions& opts);

// Contiguous dof blocks per (element, substep); elements in mesh order,
// sub-steps within an element, basis index last.
struct DofMap {
  std::vector<std::vector<int>> offset;
  std::vector<std::vector<int>> block_size;
  int total = 0;

  int operator()(int element, int substep, int i) const {
    return offset[element][substep] + i;
  }
};

DofMap build_dof_map(const SlabBases& bases);

// Max spectral norm of the diffusion tensor over the quadrature points of
// the space-time element (substep (t0,t1) of `element`); also spot-checks
// symmetry and the ellipticity bound data.theta.
double diffusion_sup(const SpatialMesh& mesh, int element, double t0, double t1, int order,
                     const ProblemData& data);

// Interior-penalty value on a vertical face:
//   sigma = C_sigma * max over incident space-time elements of
//           abar^2 (p+1)(p+2) / h_elem        (d = 2)
double penalty_value(const Face& face, const SpatialMesh& mesh, const TimeSlab& slab,
                     const SlabBases& bases, const ProblemData& data,
                     const AssemblyOptions& opts);

// sigma per face id for one slab.
struct PenaltyField {
  double C_sigma = 10.0;
  std::vector<double> sigma;
};

PenaltyField build_penalty_field(const SpatialMesh& mesh, const TimeSlab& slab,
                                 const SlabBases& bases, const ProblemData& data,
                                 const AssemblyOptions& opts);

// Sparse slab system; `spatial` carries the spatial bilinear form a(.,.)
// alone (it is symmetric), `matrix` the full slab operator.
struct SlabSystem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::SparseMatrix<double, Eigen::RowMajor> spatial;
  Eigen::VectorXd rhs;
  DofMap dof_map;
};

// Trace of the previous slab's solution (or u0), evaluated per element.
using ElementTrace = std::function<double(int element, double x, double y)>;

SlabSystem assemble_slab(const SpatialMesh& mesh, const TimeGrid& grid, int slab_index,
                         const SlabBases& bases, const ProblemData& data,
                         const ElementTrace& prev_trace, const AssemblyOptions& opts);

// Jump coupling across the interior local time nodes of one element:
// diag[j-1] is the (u+,v+) block of substep j, coupling[j-1] the -(u-,v+)
// block tying substep j to substep j-1. Empty when the element has a single
// sub-step.
struct TimeJumpBlocks {
  std::vector<Eigen::MatrixXd> diag;
  std::vector<Eigen::MatrixXd> coupling;
};

TimeJumpBlocks assemble_time_jump_terms(const SpatialMesh& mesh, int element,
                                        const TimeSlab& slab,
                                        const std::vector<ElementBasis>& element_bases,
                                        const AssemblyOptions& opts);

// One-shot space-time matrix of the full bilinear form over all slabs
// (slab blocks plus the -(u-_{n-1}, v+_{n-1}) couplings); used by the
// coercivity and inf-sup diagnostics.
struct GlobalSystem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  std::vector<DofMap> slab_dofs;
  std::vector<int> slab_offset;
  int total = 0;

  int dof(int slab, int element, int substep, int i) const {
    return slab_offset[slab] + slab_dofs[slab](element, substep, i);
  }
};

GlobalSystem assemble_global(const SpatialMesh& mesh, const TimeGrid& grid,
                             const std::vector<SlabBases>& bases, const ProblemData& data,
                             const AssemblyOptions& opts);

}  // namespace stdg
