#pragma once

#include <array>
#include <utility>
#include <vector>

#include "stdg/geometry.hpp"

namespace stdg {

struct PolygonalElement;
struct SpatialMesh;
struct Face;

// Quadrature rule on a space-time domain. Weights carry the measure of the
// integrated domain (volume for prisms, area x time for vertical faces,
// area for horizontal faces).
struct QuadRule {
  std::vector<std::array<double, 3>> points;  // (x, y, t)
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

// Gauss-Legendre nodes/weights on (0,1); exact for polynomials of degree
// 2n-1. Computed by Newton iteration, any n >= 1.
struct Gauss1D {
  std::vector<double> points;
  std::vector<double> weights;
};
Gauss1D gauss_legendre(int n);

// Smallest Gauss rule exact to `degree`.
inline int gauss_count(int degree) { return degree / 2 + 1; }

// Quadrature over a triangle, exact for bivariate polynomials of total
// degree <= order (collapsed tensor construction).
struct TriangleRule {
  std::vector<Point2> points;
  std::vector<double> weights;
};
TriangleRule triangle_rule(Point2 a, Point2 b, Point2 c, int order);

// Volume rule over the prism (element sub-triangulation) x (t0,t1); exact
// for space-time polynomials of total degree <= order.
QuadRule prism_rule(const SpatialMesh& mesh, int element_id, double t0, double t1, int order);

// Rule over a vertical space-time face F x (t0,t1); exact to `order` in the
// arclength and time directions separately.
QuadRule vertical_face_rule(const Face& face, const SpatialMesh& mesh, double t0, double t1,
                            int order);

// Spatial rule over the element at a fixed time t (a horizontal space-time
// face); exact for spatial polynomials of total degree <= order.
QuadRule horizontal_face_rule(const SpatialMesh& mesh, int element_id, int order,
                              double t = 0.0);

// Time rule on (0,tau) mapped through t = tau*s^2. Integrates f(t)*poly(t)
// exactly when f(t)*sqrt(t) is polynomial; used for data with an algebraic
// singularity at t=0.
Gauss1D sqrt_graded_time_rule(double tau, int n);

// Prism rule over element x (0,t1) with the sqrt-graded time rule; spatial
// part exact to `order`.
QuadRule graded_prism_rule(const SpatialMesh& mesh, int element_id, double t1, int order);

}  // namespace stdg
