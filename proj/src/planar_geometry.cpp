#include "anisorobin/planar_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anisorobin/errors.hpp"

namespace anisorobin {

namespace {

constexpr double kRepeatTol = 1e-12;
constexpr double kOutsideTol = 1e-12;
constexpr double kInradiusTol = 1e-10;

// Directed line; the admissible side is to the left of `dir`.
struct Line {
  Vec2 point;
  Vec2 dir;
  double angle;
  bool out(const Vec2& r) const { return cross(dir, r - point) < 0.0; }
};

Vec2 intersection(const Line& s, const Line& t) {
  const double alpha = cross(t.point - s.point, t.dir) / cross(s.dir, t.dir);
  return s.point + alpha * s.dir;
}

std::vector<Vec2> drop_repeats(std::vector<Vec2> pts, double tol) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts)
    if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
  while (out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
  return out;
}

double chain_scale(std::span<const Vec2> pts) {
  double s = 0.0;
  for (const Vec2& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return std::max(s, 1.0);
}

// Edge-wise d_F without the inside check; linear extension outside.
double raw_distance(const Vec2& x, const ConvexPolygon& poly, const std::vector<double>& weights) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    d = std::min(d, (poly.offset(i) - x.dot(poly.normal(i))) / weights[i]);
  return d;
}

std::vector<double> normal_weights(const ConvexPolygon& poly, const FinslerNorm& norm) {
  std::vector<double> w(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) w[i] = norm.eval(poly.normal(i));
  return w;
}

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw InvalidPolygonError("polygon needs at least 3 vertices");
  for (const Vec2& v : vertices_)
    if (!v.allFinite()) throw InvalidPolygonError("polygon has non-finite coordinates");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((vertices_[i] - vertices_[j]).norm() <= kRepeatTol)
        throw InvalidPolygonError("polygon has repeated vertices " + std::to_string(i) + " and " + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices_[(i + 1) % n] - vertices_[i];
    const Vec2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    if (!(cross(e0, e1) > 0.0))
      throw InvalidPolygonError("polygon is not strictly convex and CCW at vertex " + std::to_string((i + 1) % n));
  }
  // Strict left turns everywhere still admit a star winding more than once.
  if (!(signed_area(vertices_) > 0.0)) throw InvalidPolygonError("polygon is not CCW");
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices_[(i + 1) % n] - vertices_[i];
    const Vec2 e1 = vertices_[(i + 2) % n] - vertices_[(i + 1) % n];
    turning += std::atan2(cross(e0, e1), e0.dot(e1));
  }
  if (std::abs(turning - 2.0 * kPi) > 1e-6) throw InvalidPolygonError("polygon winds more than once");
  compute_edges();
}

ConvexPolygon ConvexPolygon::from_trusted(std::vector<Vec2> vertices) {
  ConvexPolygon p;
  const double tol = 1e-15 * chain_scale(vertices);
  p.vertices_ = drop_repeats(std::move(vertices), tol);
  p.compute_edges();
  return p;
}

void ConvexPolygon::compute_edges() {
  const std::size_t n = vertices_.size();
  normals_.resize(n);
  lengths_.resize(n);
  offsets_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e = vertices_[(i + 1) % n] - vertices_[i];
    lengths_[i] = e.norm();
    normals_[i] = lengths_[i] > 0.0 ? Vec2(e.y() / lengths_[i], -e.x() / lengths_[i]) : Vec2::Zero();
    offsets_[i] = normals_[i].dot(vertices_[i]);
  }
}

std::vector<HalfPlane> ConvexPolygon::half_planes() const {
  std::vector<HalfPlane> hp(size());
  for (std::size_t i = 0; i < size(); ++i) hp[i] = {normals_[i], offsets_[i]};
  return hp;
}

Vec2 ConvexPolygon::centroid() const {
  // Fan triangles from the first vertex, in coordinates relative to it.
  const std::size_t n = size();
  const Vec2& o = vertices_[0];
  double a2 = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 p = vertices_[i] - o, q = vertices_[i + 1] - o;
    const double w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  if (!(a2 > 0.0)) {
    Vec2 mean = Vec2::Zero();
    for (const Vec2& v : vertices_) mean += v;
    return mean / static_cast<double>(std::max<std::size_t>(n, 1));
  }
  return o + c / (3.0 * a2);
}

double ConvexPolygon::perimeter() const { return std::accumulate(lengths_.begin(), lengths_.end(), 0.0); }

double signed_area(std::span<const Vec2> chain) {
  // Fan from the first vertex: avoids cancellation for small sets far from the origin.
  double twice = 0.0;
  for (std::size_t i = 1; i + 1 < chain.size(); ++i) twice += cross(chain[i] - chain[0], chain[i + 1] - chain[0]);
  return 0.5 * twice;
}

double area(const ConvexPolygon& poly) { return signed_area(poly.vertices()); }

double anis_perimeter(const ConvexPolygon& poly, const FinslerNorm& norm) {
  double p = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    if (poly.edge_length(i) > 0.0) p += norm.eval(poly.normal(i)) * poly.edge_length(i);
  return p;
}

double anis_distance(const Vec2& x, const ConvexPolygon& poly, const FinslerNorm& norm) {
  const double d = raw_distance(x, poly, normal_weights(poly, norm));
  if (d < -kOutsideTol) throw OutsideDomainError("anis_distance: point lies outside the polygon");
  return std::max(d, 0.0);
}

std::optional<std::vector<Vec2>> intersect_half_planes(std::span<const HalfPlane> planes) {
  std::vector<Line> lines;
  lines.reserve(planes.size());
  for (const HalfPlane& h : planes) {
    const Vec2 dir = perp(h.normal);
    lines.push_back({h.offset * h.normal, dir, std::atan2(dir.y(), dir.x())});
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.angle < b.angle; });

  std::vector<Line> dq(lines.size() + 1);
  std::size_t head = 0, len = 0;
  auto at = [&](std::size_t i) -> Line& { return dq[head + i]; };
  for (const Line& h : lines) {
    while (len > 1 && h.out(intersection(at(len - 1), at(len - 2)))) --len;
    while (len > 1 && h.out(intersection(at(0), at(1)))) {
      ++head;
      --len;
    }
    if (len > 0 && std::abs(cross(h.dir, at(len - 1).dir)) < 1e-15) {
      if (h.dir.dot(at(len - 1).dir) < 0.0) return std::nullopt;
      if (h.out(at(len - 1).point)) {
        --len;
      } else {
        continue;
      }
    }
    at(len++) = h;
  }
  while (len > 2 && at(0).out(intersection(at(len - 1), at(len - 2)))) --len;
  while (len > 2 && at(len - 1).out(intersection(at(0), at(1)))) {
    ++head;
    --len;
  }
  if (len < 3) return std::nullopt;

  std::vector<Vec2> verts(len);
  for (std::size_t i = 0; i < len; ++i) verts[i] = intersection(at(i), at((i + 1) % len));
  if (!(signed_area(verts) > 0.0)) return std::nullopt;
  return verts;
}

std::optional<ConvexPolygon> inner_parallel(const ConvexPolygon& poly, const FinslerNorm& norm, double t) {
  if (t < 0.0) throw DomainError("inner_parallel: t must be non-negative");
  std::vector<HalfPlane> hp = poly.half_planes();
  for (HalfPlane& h : hp) h.offset -= t * norm.eval(h.normal);
  auto verts = intersect_half_planes(hp);
  if (!verts) return std::nullopt;
  ConvexPolygon inner = ConvexPolygon::from_trusted(std::move(*verts));
  if (inner.size() < 3 || !(area(inner) > 0.0)) return std::nullopt;
  return inner;
}

Inradius inradius(const ConvexPolygon& poly, const FinslerNorm& norm) {
  const std::vector<double> w = normal_weights(poly, norm);
  // Upper bound: the distance from any point is at most the width over F.
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    double width = 0.0;
    for (const Vec2& v : poly.vertices()) width = std::max(width, poly.offset(i) - v.dot(poly.normal(i)));
    hi = std::min(hi, width / w[i]);
  }
  double lo = 0.0;
  Vec2 center = poly.centroid();
  while (hi - lo > kInradiusTol) {
    const double mid = 0.5 * (lo + hi);
    if (auto inner = inner_parallel(poly, norm, mid)) {
      lo = mid;
      center = inner->centroid();
    } else {
      hi = mid;
    }
  }
  return {lo, center};
}

ParallelProfile profile(const ConvexPolygon& poly, const FinslerNorm& norm, std::size_t n_samples) {
  if (n_samples < 64) throw DomainError("profile: need at least 64 samples");
  ParallelProfile prof;
  prof.kappa = norm.wulff_area();
  prof.A0 = area(poly);
  prof.L0 = anis_perimeter(poly, norm);
  prof.r_f = inradius(poly, norm).r_f;
  prof.t.resize(n_samples);
  prof.A.resize(n_samples);
  prof.L.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = (i + 1 == n_samples) ? prof.r_f : prof.r_f * static_cast<double>(i) / (n_samples - 1);
    prof.t[i] = t;
    if (i == 0) {
      prof.A[i] = 0.0;
      prof.L[i] = prof.L0;
      continue;
    }
    if (auto inner = inner_parallel(poly, norm, t)) {
      prof.A[i] = prof.A0 - area(*inner);
      prof.L[i] = anis_perimeter(*inner, norm);
    } else {
      prof.A[i] = prof.A0;
      prof.L[i] = 0.0;
    }
  }
  prof.R = r_transform(prof, prof.kappa);
  return prof;
}

std::vector<double> r_transform(const ParallelProfile& prof, double kappa) {
  std::vector<double> r(prof.A.size());
  const double l0sq = prof.L0 * prof.L0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double rad = l0sq - 4.0 * kappa * prof.A[i];
    if (rad < -1e-9 * std::max(1.0, l0sq))
      throw IsoperimetricViolationError("r_transform: L0^2 - 4 kappa A(t) is negative at t = " + std::to_string(prof.t[i]));
    r[i] = std::sqrt(std::max(rad, 0.0)) / (2.0 * kappa);
  }
  return r;
}

ParallelRadii parallel_radii(const ConvexPolygon& poly, const FinslerNorm& norm) {
  const double kappa = norm.wulff_area();
  const double l0 = anis_perimeter(poly, norm);
  const double a0 = area(poly);
  ParallelRadii r;
  r.r1 = std::sqrt(std::max(0.0, l0 * l0 - 4.0 * kappa * a0)) / (2.0 * kappa);
  r.r2 = l0 / (2.0 * kappa);
  r.r3 = std::sqrt(a0 / kappa);
  return r;
}

ConvexPolygon minkowski_sum_wulff(const ConvexPolygon& poly, const FinslerNorm& norm, double delta,
                                  std::size_t n_wulff) {
  if (!(delta > 0.0)) throw DomainError("minkowski_sum_wulff: delta must be positive");
  const std::size_t n = poly.size();
  const double step = 2.0 * kPi / static_cast<double>(n_wulff);
  auto angle_of = [](const Vec2& v) {
    const double a = std::atan2(v.y(), v.x());
    return a < 0.0 ? a + 2.0 * kPi : a;
  };
  std::vector<Vec2> out;
  out.reserve(n * 4 + n_wulff + 8);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& v = poly.vertices()[i];
    const Vec2& nu_prev = poly.normal((i + n - 1) % n);
    const Vec2& nu_next = poly.normal(i);
    const double a0 = angle_of(nu_prev);
    double a1 = angle_of(nu_next);
    if (a1 <= a0) a1 += 2.0 * kPi;
    out.push_back(v + delta * norm.grad(nu_prev));
    // Wulff directions strictly between the two edge normals.
    const auto j0 = static_cast<long long>(std::floor(a0 / step)) + 1;
    for (long long j = j0; j * step < a1; ++j) {
      if (j * step <= a0) continue;
      out.push_back(v + delta * norm.grad(unit_direction(j * step)));
    }
    out.push_back(v + delta * norm.grad(nu_next));
  }
  return ConvexPolygon::from_trusted(std::move(out));
}

SteinerCheck steiner_check(const ConvexPolygon& poly, const FinslerNorm& norm, double delta, std::size_t n_wulff) {
  const ConvexPolygon sum = minkowski_sum_wulff(poly, norm, delta, n_wulff);
  const double kappa = norm.wulff_area();
  const double v = area(poly);
  const double p = anis_perimeter(poly, norm);
  return {area(sum), v + p * delta + kappa * delta * delta, anis_perimeter(sum, norm), p + 2.0 * kappa * delta};
}

double isoperimetric_deficit(const ConvexPolygon& poly, const FinslerNorm& norm) {
  const double p = anis_perimeter(poly, norm);
  return p * p - 4.0 * norm.wulff_area() * area(poly);
}

double eikonal_check(const ConvexPolygon& poly, const FinslerNorm& norm, std::size_t n_points, std::uint64_t seed) {
  if (n_points < 1) throw DomainError("eikonal_check: need at least one point");
  const std::vector<double> w = normal_weights(poly, norm);
  Vec2 lo = poly.vertices().front(), hi = lo;
  for (const Vec2& v : poly.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double h = 1e-7 * std::max(1.0, (hi - lo).maxCoeff());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y());
  double worst = 0.0;
  std::size_t accepted = 0;
  for (std::size_t attempt = 0; accepted < n_points && attempt < 1000 * n_points; ++attempt) {
    const Vec2 x(ux(rng), uy(rng));
    // Two smallest edge distances; skip the medial axis.
    double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const double d = (poly.offset(i) - x.dot(poly.normal(i))) / w[i];
      if (d < d1) {
        d2 = d1;
        d1 = d;
      } else if (d < d2) {
        d2 = d;
      }
    }
    if (d1 <= 2.0 * h || d2 - d1 < 1e-6) continue;
    const Vec2 g((raw_distance(x + Vec2(h, 0), poly, w) - raw_distance(x - Vec2(h, 0), poly, w)) / (2 * h),
                 (raw_distance(x + Vec2(0, h), poly, w) - raw_distance(x - Vec2(0, h), poly, w)) / (2 * h));
    worst = std::max(worst, std::abs(norm.eval(g) - 1.0));
    ++accepted;
  }
  return worst;
}

ConvexPolygon unit_square() { return ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

ConvexPolygon rectangle(double width, double height) {
  return ConvexPolygon({{0, 0}, {width, 0}, {width, height}, {0, height}});
}

ConvexPolygon regular_polygon(std::size_t n, double circumradius) {
  std::vector<Vec2> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = circumradius * unit_direction(2.0 * kPi * i / n + kPi / 2.0);
  return ConvexPolygon(std::move(v));
}

ConvexPolygon wulff_polygon(const FinslerNorm& norm, double radius, std::size_t n) {
  return ConvexPolygon(norm.wulff_boundary(radius, n).vertices);
}

ConvexPolygon random_convex_polygon(std::mt19937_64& rng, std::size_t n_points) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::vector<Vec2> pts;
    while (pts.size() < n_points) {
      const Vec2 p(u(rng), u(rng));
      if (p.squaredNorm() < 1.0) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
      return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    // Andrew's monotone chain, strict turns only.
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 1e-9) --k;
      hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 1e-9) --k;
      hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) continue;
    try {
      ConvexPolygon poly(hull);
      if (area(poly) > 1e-3) return poly;
    } catch (const InvalidPolygonError&) {
    }
  }
}

void to_json(nlohmann::json& j, const ConvexPolygon& poly) {
  nlohmann::json verts = nlohmann::json::array();
  for (const Vec2& v : poly.vertices()) verts.push_back({v.x(), v.y()});
  j = {{"vertices", verts}};
}

ConvexPolygon polygon_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.at("vertices").is_array())
    throw InvalidPolygonError("polygon: missing array field 'vertices'");
  std::vector<Vec2> v;
  for (const auto& p : j.at("vertices")) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw InvalidPolygonError("polygon: each vertex must be [x, y]");
    v.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  return ConvexPolygon(std::move(v));
}

}  // namespace anisorobin
