#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "stdg/geometry.hpp"

namespace stdg {

struct Vertex {
  double x = 0.0;
  double y = 0.0;
};

// Polygonal spatial element; vertex_ids is the CCW boundary loop.
struct PolygonalElement {
  int id = -1;
  std::vector<int> vertex_ids;
  double h = 0.0;  // diameter: max pairwise vertex distance
  Point2 centroid;
  double area = 0.0;
};

enum class FaceKind { Interior, Boundary };

struct Face {
  int id = -1;
  std::array<int, 2> endpoints{-1, -1};  // vertex ids
  FaceKind kind = FaceKind::Boundary;
  std::array<int, 2> elements{-1, -1};  // incident element ids; [1] == -1 on the boundary
  Point2 normal;                        // unit, outward from elements[0]
  double length = 0.0;
  int boundary_tag = 0;
};

struct SubTriangle {
  std::array<Point2, 3> v;
  double area = 0.0;
  int tagged_face = -1;  // face id of the boundary edge owned by this triangle; -1 = fill
};

// Per-element boundary sub-triangulation: one tagged triangle per face
// (a triangle element is its own triangulation, tagged for all three faces),
// plus untagged fill triangles. Together they tile the element.
struct ElementSubTriangulation {
  std::vector<SubTriangle> triangles;
  std::map<int, int> face_to_triangle;  // face id -> index into `triangles`
  double shape_constant = 0.0;          // max over faces of h|F| / (2|s_F|)
};

struct SubTriangulation {
  std::vector<ElementSubTriangulation> per_element;
  double shape_constant = 0.0;  // global max
};

struct SpatialMesh {
  std::vector<Vertex> vertices;
  std::vector<PolygonalElement> elements;
  std::vector<Face> faces;
  SubTriangulation sub_triangulation;
  std::vector<std::vector<int>> element_faces;  // per element: face ids in boundary-loop order
  double h_max = 0.0;
  double domain_area = 0.0;

  Point2 vertex_point(int vid) const { return {vertices[vid].x, vertices[vid].y}; }
  std::vector<Point2> element_loop(int eid) const {
    std::vector<Point2> loop;
    loop.reserve(elements[eid].vertex_ids.size());
    for (int v : elements[eid].vertex_ids) loop.push_back(vertex_point(v));
    return loop;
  }
  // Outward normal of `face` as seen from element `eid`.
  Point2 outward_normal(const Face& face, int eid) const {
    return face.elements[0] == eid ? face.normal : -1.0 * face.normal;
  }
  // Axis-aligned bounding box of an element.
  std::array<double, 4> element_bbox(int eid) const;
  // Element containing (x,y), located through the sub-triangles; -1 if none.
  int locate(double x, double y) const;
};

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

// nx x ny congruent rectangles over `domain`, stored as 4-gons.
SpatialMesh build_rectangular_mesh(int nx, int ny, Rect domain = {});

// Mesh from vertex coordinates and CCW element loops (shared vertex pairs
// become interior faces). boundary_tags entries are (va, vb, tag).
SpatialMesh build_mesh(std::vector<Vertex> vertices, std::vector<std::vector<int>> loops,
                       const std::vector<std::array<int, 3>>& boundary_tags = {});

// Structured-text mesh file (see README for the schema).
SpatialMesh load_mesh(const std::string& path);

// Sub-triangulation of a single element: centroid fan for convex polygons,
// ear clipping (with barycentric splitting of triangles owning more than one
// boundary face) otherwise. Triangle elements triangulate to themselves.
ElementSubTriangulation sub_triangulate(const PolygonalElement& element,
                                        const std::vector<Vertex>& vertices,
                                        const std::vector<int>& face_ids,
                                        const std::vector<Face>& faces);

// Per-element empirical C_s (max over faces of h|F|/(2|s_F|)) and, in
// `global`, the mesh-wide max.
struct ShapeRegularityReport {
  std::map<int, double> per_element;
  double global = 0.0;
};
ShapeRegularityReport shape_regularity_report(const SpatialMesh& mesh);

}  // namespace stdg
