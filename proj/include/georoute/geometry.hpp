// Planar geometry primitives: orientation, segment intersection, angular
// ordering around a node, next-left/next-right rotation, convex hulls.
// All routing predicates in the library bottom out here.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace georoute {

// Signed-area magnitudes below this are treated as collinear. Random
// continuous placements make exact degeneracy measure-zero; the band makes
// "lies on" testable for hand-built fixtures.
inline constexpr double kCollinearEps = 1e-9;

struct Point {
  double x = 0.0;  // meters
  double y = 0.0;  // meters
};

inline bool operator==(const Point& a, const Point& b) {
  return a.x == b.x && a.y == b.y;  // exact coordinate equality
}
inline bool operator!=(const Point& a, const Point& b) { return !(a == b); }
inline bool lex_less(const Point& a, const Point& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

struct Segment {
  Point a;
  Point b;
};

// Vertices in counterclockwise order; convex when produced by convex_hull.
struct Polygon {
  std::vector<Point> vertices;
};

enum class Orientation { Clockwise, Collinear, CounterClockwise };

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double dist_sq(const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  return dx * dx + dy * dy;
}

inline double dist(const Point& a, const Point& b) {
  return std::sqrt(dist_sq(a, b));
}

inline Orientation orientation(const Point& p, const Point& q, const Point& r) {
  const double c = cross(p, q, r);
  if (std::abs(c) < kCollinearEps) return Orientation::Collinear;
  return c > 0 ? Orientation::CounterClockwise : Orientation::Clockwise;
}

// p assumed collinear with s; true iff p lies within s's bounding box.
inline bool collinear_point_on_segment(const Segment& s, const Point& p) {
  return p.x >= std::min(s.a.x, s.b.x) - kCollinearEps &&
         p.x <= std::max(s.a.x, s.b.x) + kCollinearEps &&
         p.y >= std::min(s.a.y, s.b.y) - kCollinearEps &&
         p.y <= std::max(s.a.y, s.b.y) + kCollinearEps;
}

// Closed-segment test: touching endpoints and collinear overlap count.
inline bool segments_intersect(const Segment& s1, const Segment& s2) {
  const Orientation o1 = orientation(s1.a, s1.b, s2.a);
  const Orientation o2 = orientation(s1.a, s1.b, s2.b);
  const Orientation o3 = orientation(s2.a, s2.b, s1.a);
  const Orientation o4 = orientation(s2.a, s2.b, s1.b);

  if (o1 != o2 && o3 != o4 && o1 != Orientation::Collinear &&
      o2 != Orientation::Collinear && o3 != Orientation::Collinear &&
      o4 != Orientation::Collinear) {
    return true;
  }
  if (o1 == Orientation::Collinear && collinear_point_on_segment(s1, s2.a)) return true;
  if (o2 == Orientation::Collinear && collinear_point_on_segment(s1, s2.b)) return true;
  if (o3 == Orientation::Collinear && collinear_point_on_segment(s2, s1.a)) return true;
  if (o4 == Orientation::Collinear && collinear_point_on_segment(s2, s1.b)) return true;
  return false;
}

// Sort key for the clockwise sweep starting at the due-east bearing:
// 0 at east, growing clockwise, in [0, 2*pi).
inline double clockwise_bearing_from_east(const Point& center, const Point& p) {
  double key = -std::atan2(p.y - center.y, p.x - center.x);
  if (key < 0) key += 2.0 * 3.141592653589793238462643383279502884;
  if (key >= 2.0 * 3.141592653589793238462643383279502884) key = 0.0;
  return key;
}

// Fixed circular permutation: clockwise from due east, ties broken by
// increasing distance from the center.
inline std::vector<Point> angular_order(const Point& center,
                                        std::span<const Point> neighbors) {
  if (neighbors.empty()) throw std::invalid_argument("angular_order: no neighbors");
  for (const Point& p : neighbors) {
    if (p == center) throw std::invalid_argument("angular_order: neighbor coincides with center");
  }
  std::vector<Point> out(neighbors.begin(), neighbors.end());
  std::stable_sort(out.begin(), out.end(), [&](const Point& a, const Point& b) {
    const double ka = clockwise_bearing_from_east(center, a);
    const double kb = clockwise_bearing_from_east(center, b);
    if (ka != kb) return ka < kb;
    return dist_sq(center, a) < dist_sq(center, b);
  });
  return out;
}

namespace detail {
inline std::size_t index_in_order(std::span<const Point> ordered, const Point& v) {
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (ordered[i] == v) return i;
  }
  throw std::invalid_argument("neighbor not present in ordered list");
}
}  // namespace detail

// Successor of v in the clockwise circular order. A single neighbor returns
// itself: the message bounces back along a pendant edge.
inline Point next_right(const Point& /*center*/, std::span<const Point> ordered,
                        const Point& v) {
  const std::size_t i = detail::index_in_order(ordered, v);
  return ordered[(i + 1) % ordered.size()];
}

// Predecessor of v in the clockwise circular order (i.e. next counterclockwise).
inline Point next_left(const Point& /*center*/, std::span<const Point> ordered,
                       const Point& v) {
  const std::size_t i = detail::index_in_order(ordered, v);
  return ordered[(i + ordered.size() - 1) % ordered.size()];
}

// Andrew monotone chain. Output is counterclockwise; degenerate inputs
// (one or two distinct points, or all collinear) yield a polygon whose
// polygon_area is zero.
inline Polygon convex_hull(std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: empty input");
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return lex_less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return Polygon{pts};

  std::vector<Point> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCollinearEps) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper chain
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= kCollinearEps) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return Polygon{hull};
}

inline double polygon_signed_area(std::span<const Point> vertices) {
  double s = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices[i];
    const Point& q = vertices[(i + 1) % n];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

// Nonnegative shoelace area; degenerate polygons report zero.
inline double polygon_area(const Polygon& poly) {
  if (poly.vertices.size() < 3) return 0.0;
  return std::abs(polygon_signed_area(poly.vertices));
}

// True iff p is inside poly or on its boundary (poly convex, ccw).
inline bool point_in_convex_polygon(const Polygon& poly, const Point& p) {
  const std::size_t n = poly.vertices.size();
  if (n == 0) return false;
  if (n == 1) return poly.vertices[0] == p;
  if (n == 2) {
    return orientation(poly.vertices[0], poly.vertices[1], p) == Orientation::Collinear &&
           collinear_point_on_segment({poly.vertices[0], poly.vertices[1]}, p);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(poly.vertices[i], poly.vertices[(i + 1) % n], p) < -kCollinearEps) return false;
  }
  return true;
}

// Strict interior test for a convex ccw polygon.
inline bool point_strictly_in_convex_polygon(const Polygon& poly, const Point& p) {
  const std::size_t n = poly.vertices.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(poly.vertices[i], poly.vertices[(i + 1) % n], p) <= kCollinearEps) return false;
  }
  return true;
}

}  // namespace georoute
