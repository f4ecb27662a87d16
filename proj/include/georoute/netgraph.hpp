// Embedded communication graphs: random node placement, unit-disk
// connectivity, Gabriel planarization, face enumeration and BFS queries.
// Adjacency lists are kept in clockwise angular order so that face
// traversal (next-left / next-right) is a constant-time rotation.
#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "georoute/geometry.hpp"
#include "georoute/rng.hpp"

namespace georoute {

using NodeId = int;

struct Graph {
  std::vector<Point> nodes;
  std::vector<std::vector<NodeId>> adj;  // clockwise angular order per node
  double unit_radius = 1.0;

  int size() const { return static_cast<int>(nodes.size()); }
  int degree(NodeId u) const { return static_cast<int>(adj[u].size()); }

  long edge_count() const {
    long twice = 0;
    for (const auto& a : adj) twice += static_cast<long>(a.size());
    return twice / 2;
  }

  bool has_edge(NodeId u, NodeId v) const {
    for (NodeId w : adj[u]) {
      if (w == v) return true;
    }
    return false;
  }

  int neighbor_index(NodeId u, NodeId v) const {
    const auto& a = adj[u];
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == v) return static_cast<int>(i);
    }
    throw std::invalid_argument("neighbor_index: v is not adjacent to u");
  }

  // Successor of `from` in u's clockwise neighbor order. With a single
  // neighbor this returns `from` itself (pendant-edge bounce).
  NodeId next_right(NodeId u, NodeId from) const {
    const auto& a = adj[u];
    const int i = neighbor_index(u, from);
    return a[(i + 1) % a.size()];
  }

  NodeId next_left(NodeId u, NodeId from) const {
    const auto& a = adj[u];
    const int i = neighbor_index(u, from);
    return a[(i + a.size() - 1) % a.size()];
  }
};

namespace detail {
inline void sort_adjacency_clockwise(Graph& g) {
  for (NodeId u = 0; u < g.size(); ++u) {
    const Point c = g.nodes[u];
    std::stable_sort(g.adj[u].begin(), g.adj[u].end(), [&](NodeId a, NodeId b) {
      const double ka = clockwise_bearing_from_east(c, g.nodes[a]);
      const double kb = clockwise_bearing_from_east(c, g.nodes[b]);
      if (ka != kb) return ka < kb;
      const double da = dist_sq(c, g.nodes[a]);
      const double db = dist_sq(c, g.nodes[b]);
      if (da != db) return da < db;
      return a < b;
    });
  }
}
}  // namespace detail

// Builds a graph from an explicit edge list (used by fixtures and tests).
inline Graph make_graph(std::vector<Point> nodes,
                        const std::vector<std::pair<NodeId, NodeId>>& edges,
                        double unit_radius = 1.0) {
  Graph g;
  g.nodes = std::move(nodes);
  g.adj.assign(g.nodes.size(), {});
  g.unit_radius = unit_radius;
  for (auto [u, v] : edges) {
    if (u == v) throw std::invalid_argument("make_graph: self-loop");
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  detail::sort_adjacency_clockwise(g);
  return g;
}

// n = round(density * field_area / (pi * unit_radius^2)) points placed
// uniformly at random; duplicate coordinates are re-drawn so all points are
// distinct. Deterministic per seed.
inline std::vector<Point> random_placement(double field_width, double field_height,
                                           double unit_radius, double density,
                                           std::uint64_t seed) {
  if (density <= 0) throw std::invalid_argument("random_placement: density must be > 0");
  if (field_width <= 0 || field_height <= 0) {
    throw std::invalid_argument("random_placement: zero-area field");
  }
  const double pi = 3.141592653589793238462643383279502884;
  const double area = field_width * field_height;
  const long n = std::lround(density * area / (pi * unit_radius * unit_radius));
  if (n <= 0) throw std::invalid_argument("random_placement: density yields zero nodes");

  SplitMix64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  while (pts.size() < static_cast<std::size_t>(n)) {
    Point p{rng.next_double() * field_width, rng.next_double() * field_height};
    bool dup = false;
    for (const Point& q : pts) {
      if (q == p) {
        dup = true;
        break;
      }
    }
    if (!dup) pts.push_back(p);
  }
  return pts;
}

// Edge (u,v) iff dist(u,v) <= unit_radius (closed threshold).
inline Graph unit_disk_graph(std::vector<Point> points, double unit_radius) {
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (points[i] == points[j]) {
        throw std::invalid_argument("unit_disk_graph: duplicate coordinates");
      }
    }
  }
  Graph g;
  g.nodes = std::move(points);
  g.adj.assign(n, {});
  g.unit_radius = unit_radius;
  const double r2 = unit_radius * unit_radius;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist_sq(g.nodes[i], g.nodes[j]) <= r2) {
        g.adj[i].push_back(static_cast<NodeId>(j));
        g.adj[j].push_back(static_cast<NodeId>(i));
      }
    }
  }
  detail::sort_adjacency_clockwise(g);
  return g;
}

// Keeps edge (u,v) iff no third node lies strictly inside the closed disk
// with diameter uv. Boundary points do not remove the edge. Candidates are
// restricted to u's unit-disk neighbors: any witness w satisfies
// dist(u,w) <= dist(u,v) <= unit_radius.
inline Graph gabriel_subgraph(const Graph& g) {
  Graph out;
  out.nodes = g.nodes;
  out.adj.assign(g.nodes.size(), {});
  out.unit_radius = g.unit_radius;
  for (NodeId u = 0; u < g.size(); ++u) {
    for (NodeId v : g.adj[u]) {
      if (v < u) continue;
      const Point mid{(g.nodes[u].x + g.nodes[v].x) / 2.0,
                      (g.nodes[u].y + g.nodes[v].y) / 2.0};
      const double r2 = dist_sq(g.nodes[u], g.nodes[v]) / 4.0;
      bool keep = true;
      for (NodeId w : g.adj[u]) {
        if (w == v) continue;
        if (dist_sq(g.nodes[w], mid) < r2) {
          keep = false;
          break;
        }
      }
      if (keep) {
        out.adj[u].push_back(v);
        out.adj[v].push_back(u);
      }
    }
  }
  detail::sort_adjacency_clockwise(out);
  return out;
}

struct DirectedEdge {
  NodeId from;
  NodeId to;
};
inline bool operator==(const DirectedEdge& a, const DirectedEdge& b) {
  return a.from == b.from && a.to == b.to;
}

// One traversal cycle of the next-left rule. Every directed edge of the
// graph belongs to exactly one face.
struct Face {
  std::vector<DirectedEdge> boundary;
  bool is_external = false;
  double signed_area = 0.0;
  double perimeter = 0.0;
};

// Partitions all directed edges into next-left traversal cycles. The cycle
// with the largest signed boundary area is the external face; with this
// successor rule internal faces wind clockwise (negative area) and the
// external face counterclockwise.
inline std::vector<Face> enumerate_faces(const Graph& g) {
  std::vector<Face> faces;
  // visited[u][i] marks directed edge (u, adj[u][i]).
  std::vector<std::vector<char>> visited(g.size());
  for (NodeId u = 0; u < g.size(); ++u) visited[u].assign(g.adj[u].size(), 0);

  for (NodeId u0 = 0; u0 < g.size(); ++u0) {
    for (std::size_t i0 = 0; i0 < g.adj[u0].size(); ++i0) {
      if (visited[u0][i0]) continue;
      Face face;
      NodeId u = u0;
      std::size_t i = i0;
      do {
        visited[u][i] = 1;
        const NodeId v = g.adj[u][i];
        face.boundary.push_back({u, v});
        face.signed_area += 0.5 * (g.nodes[u].x * g.nodes[v].y - g.nodes[v].x * g.nodes[u].y);
        face.perimeter += dist(g.nodes[u], g.nodes[v]);
        // Next edge of the face: rotate one step counterclockwise past the
        // reversed edge (v,u), i.e. (v, next_left(v, u)).
        const int back = g.neighbor_index(v, u);
        const std::size_t next = (back + g.adj[v].size() - 1) % g.adj[v].size();
        u = v;
        i = next;
      } while (!(u == u0 && i == i0));
      faces.push_back(std::move(face));
    }
  }

  if (!faces.empty()) {
    std::size_t ext = 0;
    for (std::size_t f = 1; f < faces.size(); ++f) {
      if (faces[f].signed_area > faces[ext].signed_area) ext = f;
    }
    faces[ext].is_external = true;
  }
  return faces;
}

// BFS hop distance on the full graph; nullopt when t is unreachable.
inline std::optional<int> shortest_path_hops(const Graph& g, NodeId s, NodeId t) {
  if (s == t) return 0;
  std::vector<int> d(g.size(), -1);
  d[s] = 0;
  std::deque<NodeId> q{s};
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    for (NodeId v : g.adj[u]) {
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        if (v == t) return d[v];
        q.push_back(v);
      }
    }
  }
  return std::nullopt;
}

inline std::vector<bool> reachable_set(const Graph& g, NodeId s) {
  std::vector<bool> seen(g.size(), false);
  seen[s] = true;
  std::deque<NodeId> q{s};
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    for (NodeId v : g.adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        q.push_back(v);
      }
    }
  }
  return seen;
}

namespace detail {
inline void write_double(std::ostream& os, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, res.ptr - buf);
}
}  // namespace detail

// Plain-text dump: header `nodes <n> radius <r>`, then `<id> <x> <y>` lines,
// then `edge <u> <v>` lines.
inline void dump_graph(std::ostream& os, const Graph& g) {
  os << "nodes " << g.size() << " radius ";
  detail::write_double(os, g.unit_radius);
  os << "\n";
  for (NodeId u = 0; u < g.size(); ++u) {
    os << u << " ";
    detail::write_double(os, g.nodes[u].x);
    os << " ";
    detail::write_double(os, g.nodes[u].y);
    os << "\n";
  }
  for (NodeId u = 0; u < g.size(); ++u) {
    for (NodeId v : g.adj[u]) {
      if (u < v) os << "edge " << u << " " << v << "\n";
    }
  }
}

inline Graph load_graph(std::istream& is) {
  std::string tag;
  int n = 0;
  double radius = 0;
  if (!(is >> tag) || tag != "nodes") throw std::runtime_error("graph dump: missing 'nodes' header");
  if (!(is >> n)) throw std::runtime_error("graph dump: bad node count");
  if (!(is >> tag) || tag != "radius") throw std::runtime_error("graph dump: missing 'radius'");
  if (!(is >> radius)) throw std::runtime_error("graph dump: bad radius");
  std::vector<Point> pts(n);
  for (int i = 0; i < n; ++i) {
    int id;
    double x, y;
    if (!(is >> id >> x >> y) || id != i) throw std::runtime_error("graph dump: bad node line");
    pts[i] = Point{x, y};
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  while (is >> tag) {
    if (tag != "edge") break;  // start of an optional trailing section
    int u, v;
    if (!(is >> u >> v)) throw std::runtime_error("graph dump: bad edge line");
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::runtime_error("graph dump: edge id out of range");
    edges.emplace_back(u, v);
  }
  return make_graph(std::move(pts), edges, radius);
}

}  // namespace georoute
