#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace stdg {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

// Signed area of a closed polygon loop (positive for CCW orientation).
inline double polygon_signed_area(const std::vector<Point2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& p = v[i];
    const Point2& q = v[(i + 1) % v.size()];
    s += cross(p, q);
  }
  return 0.5 * s;
}

inline Point2 polygon_centroid(const std::vector<Point2>& v) {
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2& p = v[i];
    const Point2& q = v[(i + 1) % v.size()];
    double w = cross(p, q);
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  a *= 0.5;
  return {cx / (6.0 * a), cy / (6.0 * a)};
}

inline double polygon_diameter(const std::vector<Point2>& v) {
  double h = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) h = std::max(h, dist(v[i], v[j]));
  return h;
}

// Convexity test for a CCW loop; collinear consecutive edges are allowed
// (they arise from faces split into collinear sub-faces).
inline bool polygon_is_convex(const std::vector<Point2>& v, double tol = 1e-12) {
  std::size_t n = v.size();
  double scale = polygon_diameter(v);
  for (std::size_t i = 0; i < n; ++i) {
    Point2 e1 = v[(i + 1) % n] - v[i];
    Point2 e2 = v[(i + 2) % n] - v[(i + 1) % n];
    if (cross(e1, e2) < -tol * scale * scale) return false;
  }
  return true;
}

namespace detail {
inline int orient(Point2 a, Point2 b, Point2 c, double eps) {
  double d = cross(b - a, c - a);
  if (d > eps) return 1;
  if (d < -eps) return -1;
  return 0;
}
inline bool on_segment(Point2 a, Point2 b, Point2 p, double eps) {
  return std::min(a.x, b.x) - eps <= p.x && p.x <= std::max(a.x, b.x) + eps &&
         std::min(a.y, b.y) - eps <= p.y && p.y <= std::max(a.y, b.y) + eps;
}
// Proper or improper intersection of segments [a,b] and [c,d].
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d, double eps) {
  int o1 = orient(a, b, c, eps), o2 = orient(a, b, d, eps);
  int o3 = orient(c, d, a, eps), o4 = orient(c, d, b, eps);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c, eps)) return true;
  if (o2 == 0 && on_segment(a, b, d, eps)) return true;
  if (o3 == 0 && on_segment(c, d, a, eps)) return true;
  if (o4 == 0 && on_segment(c, d, b, eps)) return true;
  return false;
}
}  // namespace detail

// A loop is simple if non-adjacent edges never touch and adjacent edges meet
// only at their shared vertex. Collinear vertices along an edge are fine.
inline bool polygon_is_simple(const std::vector<Point2>& v) {
  std::size_t n = v.size();
  if (n < 3) return false;
  double scale = polygon_diameter(v);
  if (!(scale > 0.0)) return false;
  double eps = 1e-14 * scale * scale;
  for (std::size_t i = 0; i < n; ++i) {
    Point2 a = v[i], b = v[(i + 1) % n];
    if (dist(a, b) <= 1e-14 * scale) return false;  // zero-length edge
    for (std::size_t j = i + 1; j < n; ++j) {
      Point2 c = v[j], d = v[(j + 1) % n];
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Shared endpoint only; a reversal (spike) makes the loop non-simple.
        Point2 shared = (j == i + 1) ? b : a;
        Point2 e1 = (j == i + 1) ? a - shared : b - shared;
        Point2 e2 = (j == i + 1) ? d - shared : c - shared;
        if (std::abs(cross(e1, e2)) <= eps && dot(e1, e2) > 0) return false;
        continue;
      }
      if (detail::segments_intersect(a, b, c, d, eps)) return false;
    }
  }
  return true;
}

// Barycentric point-in-triangle test with absolute tolerance on the
// signed-area coordinates.
inline bool point_in_triangle(Point2 p, Point2 a, Point2 b, Point2 c, double tol = 1e-12) {
  double s1 = cross(b - a, p - a);
  double s2 = cross(c - b, p - b);
  double s3 = cross(a - c, p - c);
  double area2 = cross(b - a, c - a);
  double lo = -tol * std::abs(area2);
  return s1 >= lo && s2 >= lo && s3 >= lo;
}

}  // namespace stdg
