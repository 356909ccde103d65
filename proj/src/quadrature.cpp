#include "stdg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "stdg/mesh.hpp"

namespace stdg {

Gauss1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Gauss1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Nodes on (-1,1) by Newton iteration on P_n, then mapped to (0,1).
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (4.0 * i + 3.0) / (4.0 * n + 2.0));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

TriangleRule triangle_rule(Point2 a, Point2 b, Point2 c, int order) {
  if (order < 1) order = 1;
  // Collapsed (Duffy) coordinates: xi = u(1-v), eta = v on the reference
  // triangle; with the (1-v) Jacobian the integrand degree is `order` in u
  // and `order`+1 in v.
  Gauss1D gu = gauss_legendre(gauss_count(order));
  Gauss1D gv = gauss_legendre(gauss_count(order + 1));
  double area2 = cross(b - a, c - a);  // 2*area, positive for CCW
  TriangleRule rule;
  rule.points.reserve(gu.points.size() * gv.points.size());
  rule.weights.reserve(rule.points.capacity());
  for (std::size_t i = 0; i < gu.points.size(); ++i) {
    for (std::size_t j = 0; j < gv.points.size(); ++j) {
      double u = gu.points[i], v = gv.points[j];
      double xi = u * (1.0 - v), eta = v;
      Point2 p = a + xi * (b - a) + eta * (c - a);
      rule.points.push_back(p);
      rule.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - v) * area2);
    }
  }
  return rule;
}

QuadRule prism_rule(const SpatialMesh& mesh, int element_id, double t0, double t1, int order) {
  if (order < 1) order = 1;
  const auto& tri = mesh.sub_triangulation.per_element.at(element_id);
  Gauss1D gt = gauss_legendre(gauss_count(order));
  double tau = t1 - t0;
  QuadRule rule;
  for (const SubTriangle& s : tri.triangles) {
    TriangleRule tr = triangle_rule(s.v[0], s.v[1], s.v[2], order);
    for (std::size_t q = 0; q < tr.points.size(); ++q) {
      for (std::size_t k = 0; k < gt.points.size(); ++k) {
        rule.points.push_back({tr.points[q].x, tr.points[q].y, t0 + tau * gt.points[k]});
        rule.weights.push_back(tr.weights[q] * tau * gt.weights[k]);
      }
    }
  }
  return rule;
}

QuadRule vertical_face_rule(const Face& face, const SpatialMesh& mesh, double t0, double t1,
                            int order) {
  if (order < 1) order = 1;
  Gauss1D gs = gauss_legendre(gauss_count(order));
  Gauss1D gt = gauss_legendre(gauss_count(order));
  Point2 p0 = mesh.vertex_point(face.endpoints[0]);
  Point2 p1 = mesh.vertex_point(face.endpoints[1]);
  double tau = t1 - t0;
  QuadRule rule;
  rule.points.reserve(gs.points.size() * gt.points.size());
  for (std::size_t i = 0; i < gs.points.size(); ++i) {
    Point2 p = p0 + gs.points[i] * (p1 - p0);
    for (std::size_t k = 0; k < gt.points.size(); ++k) {
      rule.points.push_back({p.x, p.y, t0 + tau * gt.points[k]});
      rule.weights.push_back(face.length * gs.weights[i] * tau * gt.weights[k]);
    }
  }
  return rule;
}

QuadRule horizontal_face_rule(const SpatialMesh& mesh, int element_id, int order, double t) {
  if (order < 1) order = 1;
  const auto& tri = mesh.sub_triangulation.per_element.at(element_id);
  QuadRule rule;
  for (const SubTriangle& s : tri.triangles) {
    TriangleRule tr = triangle_rule(s.v[0], s.v[1], s.v[2], order);
    for (std::size_t q = 0; q < tr.points.size(); ++q) {
      rule.points.push_back({tr.points[q].x, tr.points[q].y, t});
      rule.weights.push_back(tr.weights[q]);
    }
  }
  return rule;
}

Gauss1D sqrt_graded_time_rule(double tau, int n) {
  Gauss1D g = gauss_legendre(n);
  Gauss1D out;
  out.points.resize(g.points.size());
  out.weights.resize(g.points.size());
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    double s = g.points[i];
    out.points[i] = tau * s * s;
    out.weights[i] = 2.0 * tau * s * g.weights[i];
  }
  return out;
}

QuadRule graded_prism_rule(const SpatialMesh& mesh, int element_id, double t1, int order) {
  const auto& tri = mesh.sub_triangulation.per_element.at(element_id);
  Gauss1D gt = sqrt_graded_time_rule(t1, gauss_count(2 * order + 2));
  QuadRule rule;
  for (const SubTriangle& s : tri.triangles) {
    TriangleRule tr = triangle_rule(s.v[0], s.v[1], s.v[2], order);
    for (std::size_t q = 0; q < tr.points.size(); ++q)
      for (std::size_t k = 0; k < gt.points.size(); ++k) {
        rule.points.push_back({tr.points[q].x, tr.points[q].y, gt.points[k]});
        rule.weights.push_back(tr.weights[q] * gt.weights[k]);
      }
  }
  return rule;
}

}  // namespace stdg
