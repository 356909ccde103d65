#include "stdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "stdg/errors.hpp"

namespace stdg {

namespace {

std::string elem_name(int id) { return "element " + std::to_string(id); }

// Loop with strictly collinear vertices removed; keeps, per reduced edge,
// the chain of original loop positions it covers.
struct ReducedLoop {
  std::vector<int> pos;                            // indices into the original loop
  std::vector<std::vector<int>> edge_chain_faces;  // per reduced edge: original edge indices
};

ReducedLoop reduce_collinear(const std::vector<Point2>& loop) {
  const std::size_t n = loop.size();
  double scale = polygon_diameter(loop);
  double eps = 1e-12 * scale * scale;
  std::vector<int> keep;
  for (std::size_t i = 0; i < n; ++i) {
    Point2 prev = loop[(i + n - 1) % n];
    Point2 next = loop[(i + 1) % n];
    if (std::abs(cross(loop[i] - prev, next - loop[i])) > eps) keep.push_back(int(i));
  }
  if (keep.size() < 3) keep.assign({0, 1, 2});  // degenerate; caller rejects via area checks
  ReducedLoop red;
  red.pos = keep;
  red.edge_chain_faces.resize(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    int a = keep[k];
    int b = keep[(k + 1) % keep.size()];
    for (int e = a; e != b; e = int((e + 1) % n)) red.edge_chain_faces[k].push_back(e);
  }
  return red;
}

// Ear clipping of a simple CCW loop; returns triangles as index triples.
std::vector<std::array<int, 3>> ear_clip(const std::vector<Point2>& pts) {
  std::vector<int> idx(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) idx[i] = int(i);
  double scale = polygon_diameter(pts);
  double eps = 1e-12 * scale * scale;
  std::vector<std::array<int, 3>> tris;
  while (idx.size() > 3) {
    bool clipped = false;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      int ia = idx[(k + idx.size() - 1) % idx.size()];
      int ib = idx[k];
      int ic = idx[(k + 1) % idx.size()];
      Point2 a = pts[ia], b = pts[ib], c = pts[ic];
      if (cross(b - a, c - b) <= eps) continue;  // reflex or degenerate corner
      bool contains_other = false;
      for (int j : idx) {
        if (j == ia || j == ib || j == ic) continue;
        if (point_in_triangle(pts[j], a, b, c, 1e-12)) {
          contains_other = true;
          break;
        }
      }
      if (contains_other) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + k);
      clipped = true;
      break;
    }
    if (!clipped) throw GeometryError("ear clipping failed: polygon is not simple");
  }
  tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

SubTriangle make_tri(Point2 a, Point2 b, Point2 c, int tag) {
  SubTriangle t;
  t.v = {a, b, c};
  t.area = 0.5 * cross(b - a, c - a);
  t.tagged_face = tag;
  return t;
}

}  // namespace

std::array<double, 4> SpatialMesh::element_bbox(int eid) const {
  auto loop = element_loop(eid);
  double x0 = loop[0].x, x1 = loop[0].x, y0 = loop[0].y, y1 = loop[0].y;
  for (const Point2& p : loop) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return {x0, x1, y0, y1};
}

int SpatialMesh::locate(double x, double y) const {
  Point2 p{x, y};
  for (const auto& el : elements) {
    auto bb = element_bbox(el.id);
    double tol = 1e-12 * std::max(1.0, h_max);
    if (p.x < bb[0] - tol || p.x > bb[1] + tol || p.y < bb[2] - tol || p.y > bb[3] + tol)
      continue;
    for (const SubTriangle& t : sub_triangulation.per_element[el.id].triangles)
      if (point_in_triangle(p, t.v[0], t.v[1], t.v[2], 1e-10)) return el.id;
  }
  return -1;
}

ElementSubTriangulation sub_triangulate(const PolygonalElement& element,
                                        const std::vector<Vertex>& vertices,
                                        const std::vector<int>& face_ids,
                                        const std::vector<Face>& faces) {
  std::vector<Point2> loop;
  loop.reserve(element.vertex_ids.size());
  for (int v : element.vertex_ids) loop.push_back({vertices[v].x, vertices[v].y});
  const std::size_t n = loop.size();
  if (element.area <= 0.0)
    throw GeometryError("sub_triangulate: degenerate (zero-area) polygon in " +
                        elem_name(element.id));

  ElementSubTriangulation out;

  if (n == 3) {
    // A triangle is its own sub-triangulation, tagged for all three faces.
    out.triangles.push_back(make_tri(loop[0], loop[1], loop[2], face_ids[0]));
    for (std::size_t k = 0; k < 3; ++k) out.face_to_triangle[face_ids[k]] = 0;
  } else if (polygon_is_convex(loop)) {
    // Centroid fan: one triangle per boundary face.
    Point2 c = element.centroid;
    for (std::size_t k = 0; k < n; ++k) {
      out.triangles.push_back(make_tri(loop[k], loop[(k + 1) % n], c, face_ids[k]));
      out.face_to_triangle[face_ids[k]] = int(out.triangles.size()) - 1;
    }
  } else {
    // Ear clipping on the collinear-reduced loop, then splitting so that each
    // boundary face ends up as an edge of exactly one tagged triangle.
    ReducedLoop red = reduce_collinear(loop);
    std::vector<Point2> rpts;
    rpts.reserve(red.pos.size());
    for (int p : red.pos) rpts.push_back(loop[p]);
    auto tris = ear_clip(rpts);

    const std::size_t rn = rpts.size();
    auto reduced_edge_of = [&](int ia, int ib) -> int {
      // Reduced edge index if (ia,ib) or (ib,ia) are adjacent in the loop.
      if ((ia + 1) % int(rn) == ib) return ia;
      if ((ib + 1) % int(rn) == ia) return ib;
      return -1;
    };

    struct PendingTri {
      std::array<int, 3> v;          // reduced-loop indices; -1 when a vertex is synthetic
      std::array<Point2, 3> p;
      std::vector<int> edges;        // reduced boundary edges among (v0v1, v1v2, v2v0)
    };
    std::vector<PendingTri> pending;
    for (auto& t : tris) {
      PendingTri pt;
      pt.v = t;
      pt.p = {rpts[t[0]], rpts[t[1]], rpts[t[2]]};
      for (int k = 0; k < 3; ++k) {
        int e = reduced_edge_of(t[k], t[(k + 1) % 3]);
        if (e >= 0) pt.edges.push_back(e);
      }
      pending.push_back(std::move(pt));
    }

    // Triangles owning two boundary edges are split at their barycenter.
    std::vector<PendingTri> ready;
    for (auto& pt : pending) {
      if (pt.edges.size() <= 1) {
        ready.push_back(pt);
        continue;
      }
      Point2 g = (1.0 / 3.0) * (pt.p[0] + pt.p[1] + pt.p[2]);
      for (int k = 0; k < 3; ++k) {
        PendingTri sub;
        sub.v = {pt.v[k], pt.v[(k + 1) % 3], -1};
        sub.p = {pt.p[k], pt.p[(k + 1) % 3], g};
        int e = reduced_edge_of(pt.v[k], pt.v[(k + 1) % 3]);
        if (e >= 0) sub.edges.push_back(e);
        ready.push_back(std::move(sub));
      }
    }

    // Expand each boundary triangle along its face chain (collinear
    // sub-faces each get their own triangle); chord-only triangles are fill.
    for (auto& pt : ready) {
      if (pt.edges.empty()) {
        out.triangles.push_back(make_tri(pt.p[0], pt.p[1], pt.p[2], -1));
        continue;
      }
      int e = pt.edges[0];
      int ea = e, eb = int((e + 1) % rn);
      Point2 apex = pt.p[2];
      for (int k = 0; k < 3; ++k)
        if (pt.v[k] != ea && pt.v[k] != eb) {
          apex = pt.p[k];
          break;
        }
      const auto& chain = red.edge_chain_faces[e];
      for (std::size_t c = 0; c < chain.size(); ++c) {
        int le = chain[c];  // original loop edge index
        Point2 a = loop[le];
        Point2 b = loop[(le + 1) % n];
        out.triangles.push_back(make_tri(a, b, apex, face_ids[le]));
        out.face_to_triangle[face_ids[le]] = int(out.triangles.size()) - 1;
      }
    }
  }

  double tri_area = 0.0;
  for (const SubTriangle& t : out.triangles) {
    if (t.area <= 0.0)
      throw GeometryError("sub_triangulate: non-positive triangle area in " +
                          elem_name(element.id));
    tri_area += t.area;
  }
  if (std::abs(tri_area - element.area) > 1e-10 * element.area)
    throw GeometryError("sub_triangulate: triangles do not tile " + elem_name(element.id));

  for (int fid : face_ids)
    if (!out.face_to_triangle.count(fid))
      throw GeometryError("sub_triangulate: untagged face in " + elem_name(element.id));

  out.shape_constant = 0.0;
  for (int fid : face_ids) {
    const SubTriangle& s = out.triangles[out.face_to_triangle.at(fid)];
    out.shape_constant =
        std::max(out.shape_constant, element.h * faces[fid].length / (2.0 * s.area));
  }
  return out;
}

SpatialMesh build_mesh(std::vector<Vertex> vertices, std::vector<std::vector<int>> loops,
                       const std::vector<std::array<int, 3>>& boundary_tags) {
  SpatialMesh mesh;
  mesh.vertices = std::move(vertices);

  mesh.elements.reserve(loops.size());
  for (std::size_t e = 0; e < loops.size(); ++e) {
    PolygonalElement el;
    el.id = int(e);
    el.vertex_ids = std::move(loops[e]);
    if (el.vertex_ids.size() < 3)
      throw GeometryError(elem_name(el.id) + " has fewer than 3 vertices");
    std::vector<Point2> loop;
    for (int v : el.vertex_ids) {
      if (v < 0 || std::size_t(v) >= mesh.vertices.size())
        throw GeometryError(elem_name(el.id) + " references unknown vertex " +
                            std::to_string(v));
      if (!std::isfinite(mesh.vertices[v].x) || !std::isfinite(mesh.vertices[v].y))
        throw GeometryError("non-finite vertex coordinates");
      loop.push_back({mesh.vertices[v].x, mesh.vertices[v].y});
    }
    if (!polygon_is_simple(loop))
      throw GeometryError(elem_name(el.id) + " has a self-intersecting boundary");
    double area = polygon_signed_area(loop);
    if (area <= 0.0)
      throw GeometryError(elem_name(el.id) + " is not counter-clockwise oriented");
    el.area = area;
    el.centroid = polygon_centroid(loop);
    el.h = polygon_diameter(loop);
    mesh.elements.push_back(std::move(el));
  }

  // Faces: consecutive vertex pairs; shared undirected pairs become interior.
  std::map<std::pair<int, int>, int> face_of;
  mesh.element_faces.resize(mesh.elements.size());
  for (const auto& el : mesh.elements) {
    const auto& vid = el.vertex_ids;
    for (std::size_t k = 0; k < vid.size(); ++k) {
      int a = vid[k], b = vid[(k + 1) % vid.size()];
      auto key = std::minmax(a, b);
      auto it = face_of.find(key);
      if (it == face_of.end()) {
        Face f;
        f.id = int(mesh.faces.size());
        f.endpoints = {a, b};
        f.elements = {el.id, -1};
        f.kind = FaceKind::Boundary;
        Point2 d = mesh.vertex_point(b) - mesh.vertex_point(a);
        f.length = norm(d);
        f.normal = {d.y / f.length, -d.x / f.length};  // outward for a CCW loop
        mesh.faces.push_back(f);
        face_of.emplace(key, f.id);
        mesh.element_faces[el.id].push_back(f.id);
      } else {
        Face& f = mesh.faces[it->second];
        if (f.elements[1] != -1)
          throw GeometryError("face (" + std::to_string(a) + "," + std::to_string(b) +
                              ") is shared by more than two elements");
        if (f.endpoints[0] != b || f.endpoints[1] != a)
          throw GeometryError("inconsistent orientation on face (" + std::to_string(a) + "," +
                              std::to_string(b) + ")");
        f.elements[1] = el.id;
        f.kind = FaceKind::Interior;
        mesh.element_faces[el.id].push_back(f.id);
      }
    }
  }

  for (const auto& tag : boundary_tags) {
    auto key = std::minmax(tag[0], tag[1]);
    auto it = face_of.find(key);
    if (it == face_of.end() || mesh.faces[it->second].kind != FaceKind::Boundary)
      throw GeometryError("boundary tag refers to a non-boundary vertex pair (" +
                          std::to_string(tag[0]) + "," + std::to_string(tag[1]) + ")");
    mesh.faces[it->second].boundary_tag = tag[2];
  }

  // Domain area from the boundary loop(s); gaps or overlaps between elements
  // show up as a mismatch with the summed element areas.
  double elem_area = 0.0;
  for (const auto& el : mesh.elements) elem_area += el.area;
  double bdry_area = 0.0;
  for (const auto& f : mesh.faces) {
    if (f.kind != FaceKind::Boundary) continue;
    Point2 a = mesh.vertex_point(f.endpoints[0]);
    Point2 b = mesh.vertex_point(f.endpoints[1]);
    bdry_area += 0.5 * cross(a, b);
  }
  if (std::abs(elem_area - bdry_area) > 1e-12 * elem_area)
    throw GeometryError("element areas do not tile the domain (overlap or gap)");
  mesh.domain_area = elem_area;

  mesh.h_max = 0.0;
  for (const auto& el : mesh.elements) mesh.h_max = std::max(mesh.h_max, el.h);

  mesh.sub_triangulation.per_element.resize(mesh.elements.size());
  mesh.sub_triangulation.shape_constant = 0.0;
  for (const auto& el : mesh.elements) {
    auto st = sub_triangulate(el, mesh.vertices, mesh.element_faces[el.id], mesh.faces);
    mesh.sub_triangulation.shape_constant =
        std::max(mesh.sub_triangulation.shape_constant, st.shape_constant);
    mesh.sub_triangulation.per_element[el.id] = std::move(st);
  }
  return mesh;
}

SpatialMesh build_rectangular_mesh(int nx, int ny, Rect domain) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_rectangular_mesh: nx and ny must be >= 1");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
    throw std::invalid_argument("build_rectangular_mesh: empty domain");
  std::vector<Vertex> vertices;
  vertices.reserve(std::size_t(nx + 1) * (ny + 1));
  double dx = (domain.x1 - domain.x0) / nx;
  double dy = (domain.y1 - domain.y0) / ny;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices.push_back({domain.x0 + i * dx, domain.y0 + j * dy});
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::vector<int>> loops;
  loops.reserve(std::size_t(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      loops.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return build_mesh(std::move(vertices), std::move(loops));
}

SpatialMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError(path + ":" + std::to_string(line) + ": " + e.what());
  }

  try {
    std::vector<Vertex> vertices;
    for (const auto& v : j.at("vertices"))
      vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    std::vector<std::vector<int>> loops;
    for (const auto& e : j.at("elements")) loops.push_back(e.get<std::vector<int>>());
    std::vector<std::array<int, 3>> tags;
    if (j.contains("boundary_tags"))
      for (const auto& t : j.at("boundary_tags"))
        tags.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    return build_mesh(std::move(vertices), std::move(loops), tags);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

ShapeRegularityReport shape_regularity_report(const SpatialMesh& mesh) {
  ShapeRegularityReport rep;
  for (const auto& el : mesh.elements) {
    double cs = mesh.sub_triangulation.per_element[el.id].shape_constant;
    rep.per_element[el.id] = cs;
    rep.global = std::max(rep.global, cs);
  }
  return rep;
}

}  // namespace stdg
