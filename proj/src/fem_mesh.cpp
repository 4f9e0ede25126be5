#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "anisorobin/fem_2d.hpp"

namespace anisorobin {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

}  // namespace

double TriMesh::area() const {
  double a = 0.0;
  for (const auto& t : triangles)
    a += 0.5 * cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
  return a;
}

double TriMesh::boundary_perimeter(const FinslerNorm& norm) const {
  double p = 0.0;
  for (const BoundaryEdge& e : boundary_edges) p += norm.eval(e.normal) * e.length;
  return p;
}

TriMesh make_mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles) {
  TriMesh m;
  m.vertices = std::move(vertices);
  m.triangles = std::move(triangles);
  const int nv = static_cast<int>(m.vertices.size());
  struct EdgeUse {
    int a, b;
    int count;
  };
  std::unordered_map<std::uint64_t, EdgeUse> edges;
  edges.reserve(3 * m.triangles.size());
  for (const auto& t : m.triangles) {
    for (int v : t)
      if (v < 0 || v >= nv) throw InvalidPolygonError("mesh: triangle references a missing vertex");
    const double a2 = cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
    if (!(a2 > 0.0)) throw InvalidPolygonError("mesh: triangle with non-positive signed area");
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      auto [it, inserted] = edges.try_emplace(edge_key(a, b), EdgeUse{a, b, 0});
      if (++it->second.count > 2) throw InvalidPolygonError("mesh: edge shared by more than two triangles");
      m.h = std::max(m.h, (m.vertices[a] - m.vertices[b]).norm());
    }
  }
  for (const auto& [key, use] : edges) {
    if (use.count != 1) continue;
    const Vec2 e = m.vertices[use.b] - m.vertices[use.a];
    const double len = e.norm();
    m.boundary_edges.push_back({use.a, use.b, Vec2(e.y(), -e.x()) / len, len});
  }
  // Deterministic order independent of hashing.
  std::sort(m.boundary_edges.begin(), m.boundary_edges.end(),
            [](const BoundaryEdge& x, const BoundaryEdge& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); });
  return m;
}

TriMesh refine(const TriMesh& mesh, const std::function<Vec2(const Vec2&)>& project) {
  std::unordered_set<std::uint64_t> boundary;
  for (const BoundaryEdge& e : mesh.boundary_edges) boundary.insert(edge_key(e.a, e.b));
  std::vector<Vec2> verts = mesh.vertices;
  std::unordered_map<std::uint64_t, int> midpoint;
  midpoint.reserve(3 * mesh.triangles.size());
  auto mid = [&](int a, int b) {
    const std::uint64_t key = edge_key(a, b);
    if (auto it = midpoint.find(key); it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (verts[a] + verts[b]);
    if (project && boundary.count(key)) p = project(p);
    verts.push_back(p);
    const int idx = static_cast<int>(verts.size()) - 1;
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
    tris.push_back({t[0], ab, ca});
    tris.push_back({ab, t[1], bc});
    tris.push_back({ca, bc, t[2]});
    tris.push_back({ab, bc, ca});
  }
  return make_mesh(std::move(verts), std::move(tris));
}

TriMesh mesh_polygon(const ConvexPolygon& poly, int refinements) {
  if (refinements < 0) throw DomainError("mesh_polygon: refinements must be non-negative");
  const int n = static_cast<int>(poly.size());
  std::vector<Vec2> verts{poly.centroid()};
  verts.insert(verts.end(), poly.vertices().begin(), poly.vertices().end());
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < n; ++i) tris.push_back({0, i + 1, (i + 1) % n + 1});
  TriMesh m = make_mesh(std::move(verts), std::move(tris));
  for (int r = 0; r < refinements; ++r) m = refine(m);
  return m;
}

TriMesh mesh_wulff(const FinslerNorm& norm, double radius, std::size_t n_boundary, int refinements) {
  if (n_boundary < 16) throw DomainError("mesh_wulff: need at least 16 boundary vertices");
  if (refinements < 0) throw DomainError("mesh_wulff: refinements must be non-negative");
  const WulffApprox w = norm.wulff_boundary(radius, n_boundary);
  const int n = static_cast<int>(n_boundary);
  std::vector<Vec2> verts{Vec2::Zero()};
  verts.insert(verts.end(), w.vertices.begin(), w.vertices.end());
  std::vector<std::array<int, 3>> tris;
  for (int i = 0; i < n; ++i) tris.push_back({0, i + 1, (i + 1) % n + 1});
  TriMesh m = make_mesh(std::move(verts), std::move(tris));
  const auto onto_wulff = [&](const Vec2& p) -> Vec2 { return radius * p / norm.polar(p); };
  for (int r = 0; r < refinements; ++r) m = refine(m, onto_wulff);
  return m;
}

nlohmann::json mesh_to_json(const TriMesh& mesh) {
  nlohmann::json v = nlohmann::json::array(), t = nlohmann::json::array();
  for (const Vec2& p : mesh.vertices) v.push_back({p.x(), p.y()});
  for (const auto& tri : mesh.triangles) t.push_back({tri[0], tri[1], tri[2]});
  return {{"vertices", v}, {"triangles", t}};
}

TriMesh mesh_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("triangles"))
    throw InvalidPolygonError("mesh: expected fields 'vertices' and 'triangles'");
  std::vector<Vec2> verts;
  for (const auto& p : j.at("vertices")) {
    if (!p.is_array() || p.size() != 2) throw InvalidPolygonError("mesh: each vertex must be [x, y]");
    verts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  std::vector<std::array<int, 3>> tris;
  for (const auto& t : j.at("triangles")) {
    if (!t.is_array() || t.size() != 3) throw InvalidPolygonError("mesh: each triangle must be [i, j, k]");
    tris.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
  }
  return make_mesh(std::move(verts), std::move(tris));
}

}  // namespace anisorobin
