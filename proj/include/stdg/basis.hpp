#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "stdg/quadrature.hpp"

namespace stdg {

// Space-time polynomial index sets on a prism (d = 2):
//   TotalDegree          P:  a+b+c <= p
//   TimeTensorTotalSpace PQ: a+b <= p, c <= p
//   FullTensor           Q:  a,b,c <= p
enum class IndexSetKind { TotalDegree, TimeTensorTotalSpace, FullTensor };

struct IndexSet {
  IndexSetKind kind = IndexSetKind::TotalDegree;
  int p = 1;

  int cardinality() const;
  // Exponent triples (a,b,c) for x^a y^b t^c, in graded order.
  std::vector<std::array<int, 3>> exponents() const;
  // Max total degree of a member in the spatial pair (x,y) alone; drives
  // quadrature order selection (2p for the full tensor set, else p).
  int quad_degree() const { return kind == IndexSetKind::FullTensor ? 2 * p : p; }
};

// Bounding box of a space-time prism; monomials are scaled and centered on it.
struct PrismBox {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1, t0 = 0, t1 = 1;
  double cx() const { return 0.5 * (x0 + x1); }
  double cy() const { return 0.5 * (y0 + y1); }
  double ct() const { return 0.5 * (t0 + t1); }
  double rx() const { return 0.5 * (x1 - x0); }
  double ry() const { return 0.5 * (y1 - y0); }
  double rt() const { return 0.5 * (t1 - t0); }
};

// Orthonormal modal basis for one space-time element (spatial element id +
// temporal sub-step). Row j of `coeffs` holds the scaled-monomial expansion
// of basis function j; the matrix is lower triangular in the graded order.
struct ElementBasis {
  int element_id = -1;
  int substep = 0;
  IndexSet index_set;
  PrismBox box;
  std::vector<std::array<int, 3>> expo;
  Eigen::MatrixXd coeffs;

  int size() const { return int(coeffs.rows()); }

  // Raw scaled-monomial values (and derivatives) at a batch of points,
  // one row per monomial.
  void monomials(const std::vector<std::array<double, 3>>& pts, Eigen::MatrixXd* val,
                 Eigen::MatrixXd* dx, Eigen::MatrixXd* dy, Eigen::MatrixXd* dt) const;

  // Orthonormal basis values/derivatives, one row per basis function. Null
  // outputs are skipped. Points outside the prism are allowed (polynomial
  // extension), which face quadrature on the closure relies on.
  void evaluate(const std::vector<std::array<double, 3>>& pts, Eigen::MatrixXd* val,
                Eigen::MatrixXd* dx, Eigen::MatrixXd* dy, Eigen::MatrixXd* dt) const;

  void evaluate_point(double x, double y, double t, Eigen::VectorXd* val,
                      Eigen::VectorXd* dx, Eigen::VectorXd* dy, Eigen::VectorXd* dt) const;
};

// Modified Gram-Schmidt in the L2 inner product induced by `rule` (which
// must be exact to degree 2p on the prism), with one re-orthogonalization
// pass. Throws ConditioningError when the monomial Gram matrix is
// numerically singular.
ElementBasis orthonormalize(const IndexSet& set, int element_id, int substep,
                            const PrismBox& box, const QuadRule& rule);

}  // namespace stdg
