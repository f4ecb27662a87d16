// Euclidean trees over multicast terminals: minimum spanning tree, the
// Steiner-improvement heuristic with Fermat virtual nodes, tree metrics
// (length, diameter, Steiner hull) and the angle/tree intersection tests
// that drive juncture detection.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "georoute/geometry.hpp"
#include "georoute/netgraph.hpp"

namespace georoute {

// Terminals come first (source at index 0), then virtual nodes. Edge indices
// address the concatenation terminals ++ virtual_nodes.
struct Tree {
  std::vector<Point> terminals;
  std::vector<Point> virtual_nodes;
  std::vector<std::pair<int, int>> edges;

  int node_count() const {
    return static_cast<int>(terminals.size() + virtual_nodes.size());
  }
  bool is_virtual(int i) const { return i >= static_cast<int>(terminals.size()); }
  const Point& node_point(int i) const {
    const int m = static_cast<int>(terminals.size());
    return i < m ? terminals[i] : virtual_nodes[i - m];
  }
  double total_length() const {
    double s = 0.0;
    for (auto [a, b] : edges) s += dist(node_point(a), node_point(b));
    return s;
  }
  std::vector<int> neighbors_of(int i) const {
    std::vector<int> out;
    for (auto [a, b] : edges) {
      if (a == i) out.push_back(b);
      if (b == i) out.push_back(a);
    }
    return out;
  }
};

inline bool operator==(const Tree& a, const Tree& b) {
  return a.terminals == b.terminals && a.virtual_nodes == b.virtual_nodes &&
         a.edges == b.edges;
}
inline bool operator!=(const Tree& a, const Tree& b) { return !(a == b); }

// Structural sanity: spanning, acyclic, virtual nodes of degree exactly 3,
// and no more than m-2 of them.
inline bool tree_is_valid(const Tree& t) {
  const int n = t.node_count();
  const int m = static_cast<int>(t.terminals.size());
  if (m < 2 || static_cast<int>(t.edges.size()) != n - 1) return false;
  if (static_cast<int>(t.virtual_nodes.size()) > m - 2) return false;
  std::vector<int> deg(n, 0);
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : t.edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) return false;
    ++deg[a];
    ++deg[b];
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (int i = m; i < n; ++i) {
    if (deg[i] != 3) return false;
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

// Spanning tree of minimum total Euclidean length over the terminal points.
// Kruskal with edges ordered by (length, lexicographic endpoints) so ties
// resolve deterministically.
inline Tree euclidean_mst(std::span<const Point> terminals) {
  const int m = static_cast<int>(terminals.size());
  if (m < 2) throw std::invalid_argument("euclidean_mst: need at least 2 terminals");
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (terminals[i] == terminals[j]) {
        throw std::invalid_argument("euclidean_mst: duplicate terminals");
      }
    }
  }

  struct Cand {
    double len;
    int a, b;
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      cands.push_back({dist(terminals[i], terminals[j]), i, j});
    }
  }
  std::sort(cands.begin(), cands.end(), [&](const Cand& x, const Cand& y) {
    if (x.len != y.len) return x.len < y.len;
    const Point& xa = lex_less(terminals[x.a], terminals[x.b]) ? terminals[x.a] : terminals[x.b];
    const Point& xb = lex_less(terminals[x.a], terminals[x.b]) ? terminals[x.b] : terminals[x.a];
    const Point& ya = lex_less(terminals[y.a], terminals[y.b]) ? terminals[y.a] : terminals[y.b];
    const Point& yb = lex_less(terminals[y.a], terminals[y.b]) ? terminals[y.b] : terminals[y.a];
    if (xa != ya) return lex_less(xa, ya);
    return lex_less(xb, yb);
  });

  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  Tree t;
  t.terminals.assign(terminals.begin(), terminals.end());
  for (const Cand& c : cands) {
    const int ra = find(c.a);
    const int rb = find(c.b);
    if (ra != rb) {
      parent[ra] = rb;
      t.edges.emplace_back(c.a, c.b);
      if (static_cast<int>(t.edges.size()) == m - 1) break;
    }
  }
  return t;
}

// Geometric median of a triangle (Fermat point). If any vertex angle is
// >= 120 degrees the optimum is that vertex; otherwise Weiszfeld iteration
// from the centroid, tolerance 1e-9 m, capped at 1e4 rounds.
inline Point fermat_point(const Point& a, const Point& b, const Point& c) {
  const Point v[3] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % 3];
    const Point& r = v[(i + 2) % 3];
    const double d1 = dist(p, q), d2 = dist(p, r);
    if (d1 == 0.0 || d2 == 0.0) return p;
    const double cosang = ((q.x - p.x) * (r.x - p.x) + (q.y - p.y) * (r.y - p.y)) / (d1 * d2);
    if (cosang <= -0.5) return p;  // angle >= 120 degrees
  }
  Point f{(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
  for (int iter = 0; iter < 10000; ++iter) {
    double wsum = 0.0, fx = 0.0, fy = 0.0;
    bool at_vertex = false;
    for (const Point& p : v) {
      const double d = dist(f, p);
      if (d < 1e-12) {
        at_vertex = true;
        break;
      }
      const double w = 1.0 / d;
      wsum += w;
      fx += p.x * w;
      fy += p.y * w;
    }
    if (at_vertex) break;
    const Point next{fx / wsum, fy / wsum};
    const double step = dist(f, next);
    f = next;
    if (step < 1e-9) break;
  }
  return f;
}

// Heuristic Steiner tree: start from the MST and repeatedly replace the
// adjacent triple (a, u, b) with the largest length saving by a degree-3
// Fermat virtual node, while the saving exceeds 1e-9 m. Middles are
// restricted to terminals so existing virtual nodes keep degree 3.
inline Tree steiner_tree(std::span<const Point> terminals) {
  Tree t = euclidean_mst(terminals);
  const int m = static_cast<int>(terminals.size());

  std::vector<std::vector<int>> adj(t.node_count());
  for (auto [a, b] : t.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  while (static_cast<int>(t.virtual_nodes.size()) < m - 2) {
    double best_gain = 1e-9;
    int best_u = -1, best_a = -1, best_b = -1;
    Point best_f;
    for (int u = 0; u < m; ++u) {
      const auto& nb = adj[u];
      for (std::size_t i = 0; i < nb.size(); ++i) {
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
          const int a = nb[i], b = nb[j];
          const Point& pu = t.node_point(u);
          const Point& pa = t.node_point(a);
          const Point& pb = t.node_point(b);
          const double da = dist(pu, pa), db = dist(pu, pb);
          const double cosang = ((pa.x - pu.x) * (pb.x - pu.x) + (pa.y - pu.y) * (pb.y - pu.y)) / (da * db);
          if (cosang <= -0.5) continue;  // middle angle >= 120: no virtual node
          const Point f = fermat_point(pa, pu, pb);
          if (dist(f, pa) < 1e-12 || dist(f, pb) < 1e-12 || dist(f, pu) < 1e-12) continue;
          const double gain = (da + db) - (dist(f, pa) + dist(f, pb) + dist(f, pu));
          if (gain > best_gain) {
            best_gain = gain;
            best_u = u;
            best_a = a;
            best_b = b;
            best_f = f;
          }
        }
      }
    }
    if (best_u < 0) break;

    const int fid = t.node_count();
    t.virtual_nodes.push_back(best_f);
    auto drop_edge = [&](int x, int y) {
      for (std::size_t e = 0; e < t.edges.size(); ++e) {
        if ((t.edges[e].first == x && t.edges[e].second == y) ||
            (t.edges[e].first == y && t.edges[e].second == x)) {
          t.edges.erase(t.edges.begin() + static_cast<long>(e));
          return;
        }
      }
    };
    drop_edge(best_u, best_a);
    drop_edge(best_u, best_b);
    t.edges.emplace_back(best_a, fid);
    t.edges.emplace_back(best_b, fid);
    t.edges.emplace_back(best_u, fid);

    adj.assign(t.node_count(), {});
    for (auto [a, b] : t.edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  return t;
}

struct TreeMetrics {
  double total_length = 0.0;
  double diameter = 0.0;  // longest weighted path through the tree
  Polygon hull;
  double hull_area = 0.0;
};

namespace detail {
inline std::pair<int, double> farthest_in_tree(const Tree& t,
                                               const std::vector<std::vector<int>>& adj,
                                               int start) {
  std::vector<double> d(t.node_count(), -1.0);
  d[start] = 0.0;
  std::vector<int> stack{start};
  int best = start;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (d[v] < 0) {
        d[v] = d[u] + dist(t.node_point(u), t.node_point(v));
        if (d[v] > d[best]) best = v;
        stack.push_back(v);
      }
    }
  }
  return {best, d[best]};
}
}  // namespace detail

// Total length, weighted diameter via double traversal, convex hull and
// area over terminals plus virtual nodes.
inline TreeMetrics tree_metrics(const Tree& t) {
  TreeMetrics mtr;
  mtr.total_length = t.total_length();
  std::vector<std::vector<int>> adj(t.node_count());
  for (auto [a, b] : t.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  if (t.node_count() > 1) {
    const auto [far1, d1] = detail::farthest_in_tree(t, adj, 0);
    (void)d1;
    const auto [far2, d2] = detail::farthest_in_tree(t, adj, far1);
    (void)far2;
    mtr.diameter = d2;
  }
  std::vector<Point> all(t.terminals);
  all.insert(all.end(), t.virtual_nodes.begin(), t.virtual_nodes.end());
  mtr.hull = convex_hull(all);
  mtr.hull_area = polygon_area(mtr.hull);
  return mtr;
}

// True iff segment uv or segment uw intersects (touches, crosses or lies on)
// at least one edge of the tree. Angle intersection is limited to the two
// fixed-size graph edges, not infinite rays.
inline bool angle_intersects_tree(const Point& u, const Point& v, const Point& w,
                                  const Tree& t) {
  const Segment uv{u, v};
  const Segment uw{u, w};
  for (auto [a, b] : t.edges) {
    const Segment e{t.node_point(a), t.node_point(b)};
    if (segments_intersect(uv, e) || segments_intersect(uw, e)) return true;
  }
  return false;
}

// A node is a juncture if at least one of its consecutive-neighbor angles
// intersects the tree. Angles are the ordered pairs (c, next_left(c)): one
// degenerate angle for degree-1 nodes, k angles for degree k.
inline bool is_juncture(const Graph& g, NodeId n, const Tree& t) {
  const auto& nb = g.adj[n];
  if (nb.empty()) return false;
  const std::size_t k = nb.size();
  for (std::size_t i = 0; i < k; ++i) {
    const NodeId c = nb[i];
    const NodeId d = nb[(i + k - 1) % k];  // next-left after c
    if (angle_intersects_tree(g.nodes[n], g.nodes[c], g.nodes[d], t)) return true;
  }
  return false;
}

// Optional `tree` section of the fixture dump format.
inline void dump_tree(std::ostream& os, const Tree& t) {
  os << "tree " << t.terminals.size() << " " << t.virtual_nodes.size() << "\n";
  for (int i = 0; i < t.node_count(); ++i) {
    detail::write_double(os, t.node_point(i).x);
    os << " ";
    detail::write_double(os, t.node_point(i).y);
    os << "\n";
  }
  for (auto [a, b] : t.edges) os << "tedge " << a << " " << b << "\n";
}

inline Tree load_tree(std::istream& is, int m, int k) {
  Tree t;
  for (int i = 0; i < m + k; ++i) {
    double x, y;
    if (!(is >> x >> y)) throw std::runtime_error("tree dump: bad node line");
    if (i < m) {
      t.terminals.push_back({x, y});
    } else {
      t.virtual_nodes.push_back({x, y});
    }
  }
  std::string tag;
  for (int e = 0; e < m + k - 1; ++e) {
    int a, b;
    if (!(is >> tag) || tag != "tedge" || !(is >> a >> b)) {
      throw std::runtime_error("tree dump: bad tedge line");
    }
    t.edges.emplace_back(a, b);
  }
  return t;
}

}  // namespace georoute
