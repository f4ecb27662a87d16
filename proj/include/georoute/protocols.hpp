// Routing protocol state machines: MCFR concurrent multicast face routing,
// GFG unicast (greedy + face recovery), LGS spanning-tree multicast and GMP
// Steiner multicast (per-hop recompute and source-computed variants).
//
// Handlers are pure transition functions: they receive a message plus a
// read-only view of the node's send queue and return the actions to apply.
// All mutable state lives in the simulator; nodes store nothing between
// transmissions.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "georoute/geometry.hpp"
#include "georoute/netgraph.hpp"
#include "georoute/trees.hpp"

namespace georoute {

inline constexpr int kUnlimitedTtl = -1;
inline int decrement_ttl(int ttl) { return ttl == kUnlimitedTtl ? kUnlimitedTtl : ttl - 1; }

enum class MsgKind { FaceL, FaceR, Greedy, Recovery };

inline const char* to_string(MsgKind k) {
  switch (k) {
    case MsgKind::FaceL: return "L";
    case MsgKind::FaceR: return "R";
    case MsgKind::Greedy: return "greedy";
    case MsgKind::Recovery: return "recovery";
  }
  return "?";
}

// GFG recovery bookkeeping: where the message left greedy mode and the
// closest crossing of the entry-waypoint line seen so far.
struct RecoveryState {
  Point entry;
  double best_cross = 0.0;
};

struct RoutingMessage {
  std::uint64_t session = 0;
  MsgKind kind = MsgKind::FaceL;
  NodeId source = -1;
  std::shared_ptr<const Tree> tree;  // face kinds; also the carried tree of lgs/gmp-source
  std::vector<NodeId> targets;       // sequential kinds: remaining target ids of this leg
  NodeId sender = -1;
  NodeId receiver = -1;
  int ttl = kUnlimitedTtl;

  // Sequential unicast leg state.
  Point waypoint{};
  NodeId waypoint_node = -1;    // >= 0 when the waypoint is a real node
  int waypoint_tree_index = -1; // carried-tree protocols: index of the waypoint in `tree`
  std::optional<RecoveryState> recovery;
};

// Mates: same session, source and tree, opposite traversal directions, and
// the sender of each is the receiver of the other.
inline bool mate_of(const RoutingMessage& m1, const RoutingMessage& m2) {
  const bool opposite = (m1.kind == MsgKind::FaceL && m2.kind == MsgKind::FaceR) ||
                        (m1.kind == MsgKind::FaceR && m2.kind == MsgKind::FaceL);
  if (!opposite) return false;
  if (m1.session != m2.session || m1.source != m2.source) return false;
  if (m1.sender != m2.receiver || m1.receiver != m2.sender) return false;
  if (m1.tree == m2.tree) return true;
  if (!m1.tree || !m2.tree) return false;
  return *m1.tree == *m2.tree;
}

struct ReceiveActions {
  // When set, the incoming message found its mate: remove this pending
  // message (index into the queue view) and consume the incoming one.
  std::optional<std::size_t> cancel_pending;
  bool deliver = false;
  std::vector<RoutingMessage> enqueues;
  bool split_fired = false;
  // Juncture visited through an angle that does not intersect the tree; the
  // pseudocode does not split here, so the event is only counted.
  bool nonintersecting_juncture = false;
  bool protocol_error = false;
};

class Protocol {
 public:
  virtual ~Protocol() = default;
  virtual std::vector<RoutingMessage> initial_messages() const = 0;
  virtual ReceiveActions on_receive(NodeId node, const RoutingMessage& msg,
                                    std::span<const RoutingMessage> pending) const = 0;
  virtual const std::vector<NodeId>& targets() const = 0;
  virtual NodeId source() const = 0;
};

// ---------------------------------------------------------------------------
// MCFR
// ---------------------------------------------------------------------------

// For every consecutive-neighbor angle (a, b) at the source with b next-left
// after a that intersects the tree, inject FaceL to a and FaceR to b. An
// isolated source yields no messages.
inline std::vector<RoutingMessage> mcfr_source_init(const Graph& g, NodeId s,
                                                    std::shared_ptr<const Tree> tree,
                                                    std::uint64_t session, int ttl) {
  std::vector<RoutingMessage> out;
  const auto& nb = g.adj[s];
  if (nb.empty()) return out;
  const std::size_t k = nb.size();
  for (std::size_t i = 0; i < k; ++i) {
    const NodeId a = nb[i];
    const NodeId b = nb[(i + k - 1) % k];  // next-left after a
    if (!angle_intersects_tree(g.nodes[s], g.nodes[a], g.nodes[b], *tree)) continue;
    RoutingMessage l;
    l.session = session;
    l.kind = MsgKind::FaceL;
    l.source = s;
    l.tree = tree;
    l.sender = s;
    l.receiver = a;
    l.ttl = ttl;
    RoutingMessage r = l;
    r.kind = MsgKind::FaceR;
    r.receiver = b;
    out.push_back(std::move(l));
    out.push_back(std::move(r));
  }
  return out;
}

// Receive handler, exactly in pseudocode order: mate cancellation first,
// then delivery, then the face-rule forward, then the split into every
// other tree-intersecting angle when the traversed angle intersects.
inline ReceiveActions mcfr_on_receive(const Graph& g, NodeId n, const RoutingMessage& msg,
                                      std::span<const RoutingMessage> pending) {
  ReceiveActions act;
  if (!msg.tree || !tree_is_valid(*msg.tree)) {
    act.protocol_error = true;
    return act;
  }
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (mate_of(msg, pending[i])) {
      act.cancel_pending = i;
      return act;
    }
  }

  const Tree& t = *msg.tree;
  for (std::size_t j = 1; j < t.terminals.size(); ++j) {
    if (t.terminals[j] == g.nodes[n]) {
      act.deliver = true;
      break;
    }
  }

  const auto& nb = g.adj[n];
  if (nb.empty()) return act;  // cannot happen for a received message
  const std::size_t k = nb.size();
  const NodeId a = msg.sender;
  const NodeId b = msg.kind == MsgKind::FaceL ? g.next_left(n, a) : g.next_right(n, a);

  RoutingMessage fwd = msg;
  fwd.sender = n;
  fwd.receiver = b;
  fwd.ttl = decrement_ttl(msg.ttl);
  act.enqueues.push_back(std::move(fwd));

  // Canonical form of an angle is (c, d) with d next-left after c; the
  // traversed angle is (a, b) for FaceL and (b, a) for FaceR.
  const NodeId traversed_c = msg.kind == MsgKind::FaceL ? a : b;
  const bool traversed_hits =
      angle_intersects_tree(g.nodes[n], g.nodes[a], g.nodes[b], t);

  bool any_other_hits = false;
  if (traversed_hits) {
    for (std::size_t i = 0; i < k; ++i) {
      const NodeId c = nb[i];
      if (c == traversed_c) continue;
      const NodeId d = nb[(i + k - 1) % k];  // next-left after c
      if (!angle_intersects_tree(g.nodes[n], g.nodes[c], g.nodes[d], t)) continue;
      RoutingMessage r = msg;
      r.kind = MsgKind::FaceR;
      r.sender = n;
      r.receiver = c;
      r.ttl = decrement_ttl(msg.ttl);
      RoutingMessage l = msg;
      l.kind = MsgKind::FaceL;
      l.sender = n;
      l.receiver = d;
      l.ttl = decrement_ttl(msg.ttl);
      act.enqueues.push_back(std::move(r));
      act.enqueues.push_back(std::move(l));
      act.split_fired = true;
    }
  } else {
    for (std::size_t i = 0; i < k && !any_other_hits; ++i) {
      const NodeId c = nb[i];
      if (c == traversed_c) continue;
      const NodeId d = nb[(i + k - 1) % k];
      any_other_hits = angle_intersects_tree(g.nodes[n], g.nodes[c], g.nodes[d], t);
    }
    act.nonintersecting_juncture = any_other_hits;
  }
  return act;
}

class McfrProtocol : public Protocol {
 public:
  McfrProtocol(const Graph& planar, NodeId source, std::vector<NodeId> targets,
               std::shared_ptr<const Tree> tree, std::uint64_t session, int ttl)
      : planar_(planar),
        source_(source),
        targets_(std::move(targets)),
        tree_(std::move(tree)),
        session_(session),
        ttl_(ttl) {}

  std::vector<RoutingMessage> initial_messages() const override {
    return mcfr_source_init(planar_, source_, tree_, session_, ttl_);
  }

  ReceiveActions on_receive(NodeId node, const RoutingMessage& msg,
                            std::span<const RoutingMessage> pending) const override {
    return mcfr_on_receive(planar_, node, msg, pending);
  }

  const std::vector<NodeId>& targets() const override { return targets_; }
  NodeId source() const override { return source_; }
  const Tree& tree() const { return *tree_; }

 private:
  const Graph& planar_;
  NodeId source_;
  std::vector<NodeId> targets_;
  std::shared_ptr<const Tree> tree_;
  std::uint64_t session_;
  int ttl_;
};

// ---------------------------------------------------------------------------
// GFG unicast stepping (shared by all sequential protocols)
// ---------------------------------------------------------------------------

namespace detail {

// Intersection point of two properly crossing segments; nullopt for parallel
// or collinear pairs and for non-crossing segments.
inline std::optional<Point> crossing_point(const Segment& s1, const Segment& s2) {
  const double rx = s1.b.x - s1.a.x, ry = s1.b.y - s1.a.y;
  const double sx = s2.b.x - s2.a.x, sy = s2.b.y - s2.a.y;
  const double denom = rx * sy - ry * sx;
  if (std::abs(denom) < kCollinearEps) return std::nullopt;
  const double qpx = s2.a.x - s1.a.x, qpy = s2.a.y - s1.a.y;
  const double tt = (qpx * sy - qpy * sx) / denom;
  const double uu = (qpx * ry - qpy * rx) / denom;
  if (tt < -1e-12 || tt > 1.0 + 1e-12 || uu < -1e-12 || uu > 1.0 + 1e-12) return std::nullopt;
  return Point{s1.a.x + tt * rx, s1.a.y + tt * ry};
}

// Neighbor of n (full graph) strictly closer to w than n and closest to w;
// ties by lowest id. -1 at a local minimum.
inline NodeId greedy_next_hop(const Graph& g, NodeId n, const Point& w) {
  const double dn = dist(g.nodes[n], w);
  NodeId best = -1;
  double bestd = dn;
  for (NodeId v : g.adj[n]) {
    const double dv = dist(g.nodes[v], w);
    if (dv < bestd || (best >= 0 && dv == bestd && v < best)) {
      best = v;
      bestd = dv;
    }
  }
  return best;
}

// First planar neighbor encountered sweeping clockwise from the bearing
// n -> w: the starting edge of the recovery face traversal.
inline NodeId recovery_first_hop(const Graph& planar, NodeId n, const Point& w) {
  const double ray = clockwise_bearing_from_east(planar.nodes[n], w);
  const double two_pi = 2.0 * 3.141592653589793238462643383279502884;
  NodeId best = -1;
  double best_turn = two_pi + 1.0;
  for (NodeId v : planar.adj[n]) {
    double turn = clockwise_bearing_from_east(planar.nodes[n], planar.nodes[v]) - ray;
    if (turn < 0) turn += two_pi;
    if (turn < best_turn) {
      best_turn = turn;
      best = v;
    }
  }
  return best;
}

}  // namespace detail

enum class StepResult { Forwarded, ArrivedAtVirtual, Dead };

// One GFG unicast step at node n toward msg.waypoint. Greedy runs on the
// full graph; at a local minimum a real waypoint switches the message to
// recovery (right-hand-rule face traversal on the planar graph, changing
// faces at crossings of the entry-waypoint line that are closer to the
// waypoint), while a virtual waypoint counts as reached. Recovery returns to
// greedy at any node strictly closer to the waypoint than the entry point.
// `out` receives the forwarded message when the result is Forwarded.
inline StepResult gfg_unicast_step(const Graph& g, const Graph& planar, NodeId n,
                                   const RoutingMessage& msg, RoutingMessage& out) {
  const Point& w = msg.waypoint;

  bool in_recovery = msg.kind == MsgKind::Recovery;
  std::optional<RecoveryState> rs = msg.recovery;
  NodeId hop = -1;

  if (in_recovery) {
    if (dist(g.nodes[n], w) < dist(rs->entry, w)) {
      in_recovery = false;  // resume greedy
      rs.reset();
    } else {
      hop = planar.next_right(n, msg.sender);
    }
  }
  if (!in_recovery) {
    hop = detail::greedy_next_hop(g, n, w);
    if (hop < 0) {
      if (msg.waypoint_node < 0) return StepResult::ArrivedAtVirtual;
      rs = RecoveryState{g.nodes[n], dist(g.nodes[n], w)};
      hop = detail::recovery_first_hop(planar, n, w);
      if (hop < 0) return StepResult::Dead;
      in_recovery = true;
    }
  }

  if (in_recovery) {
    // Face change: while the candidate edge crosses the entry-waypoint line
    // strictly closer to the waypoint, take the next edge clockwise.
    const Segment line{rs->entry, w};
    for (int spins = 0; spins < planar.degree(n); ++spins) {
      const auto x = detail::crossing_point({planar.nodes[n], planar.nodes[hop]}, line);
      if (!x) break;
      const double dx = dist(*x, w);
      if (dx < rs->best_cross - 1e-12) {
        rs->best_cross = dx;
        hop = planar.next_right(n, hop);
      } else {
        break;
      }
    }
  }

  out = msg;
  out.kind = in_recovery ? MsgKind::Recovery : MsgKind::Greedy;
  out.recovery = rs;
  out.sender = n;
  out.receiver = hop;
  out.ttl = decrement_ttl(msg.ttl);
  return StepResult::Forwarded;
}

// ---------------------------------------------------------------------------
// Sequential multicast protocols
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<int> tree_parents(const Tree& t, int root) {
  std::vector<std::vector<int>> adj(t.node_count());
  for (auto [a, b] : t.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> parent(t.node_count(), -2);
  parent[root] = -1;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (parent[v] == -2) {
        parent[v] = u;
        stack.push_back(v);
      }
    }
  }
  return parent;
}

// Terminal indices (>= 1) in the component of `start` when the edge
// (avoid, start) is removed.
inline std::vector<int> subtree_terminals(const Tree& t, int start, int avoid) {
  std::vector<std::vector<int>> adj(t.node_count());
  for (auto [a, b] : t.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(t.node_count(), false);
  seen[start] = true;
  if (avoid >= 0) seen[avoid] = true;
  std::vector<int> stack{start};
  std::vector<int> out;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (u < static_cast<int>(t.terminals.size()) && u != avoid) out.push_back(u);
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Trivial baseline: one independent GFG unicast per target.
class GfgUnicastProtocol : public Protocol {
 public:
  GfgUnicastProtocol(const Graph& g, const Graph& planar, NodeId source,
                     std::vector<NodeId> targets, std::uint64_t session, int ttl)
      : g_(g), planar_(planar), source_(source), targets_(std::move(targets)),
        session_(session), ttl_(ttl) {}

  std::vector<RoutingMessage> initial_messages() const override {
    std::vector<RoutingMessage> out;
    for (NodeId t : targets_) {
      RoutingMessage leg;
      leg.session = session_;
      leg.kind = MsgKind::Greedy;
      leg.source = source_;
      leg.targets = {t};
      leg.ttl = ttl_;
      leg.waypoint = g_.nodes[t];
      leg.waypoint_node = t;
      leg.sender = source_;
      RoutingMessage stepped;
      if (gfg_unicast_step(g_, planar_, source_, leg, stepped) == StepResult::Forwarded) {
        out.push_back(std::move(stepped));
      }
    }
    return out;
  }

  ReceiveActions on_receive(NodeId node, const RoutingMessage& msg,
                            std::span<const RoutingMessage>) const override {
    ReceiveActions act;
    if (node == msg.waypoint_node) {
      act.deliver = true;
      return act;
    }
    RoutingMessage stepped;
    if (gfg_unicast_step(g_, planar_, node, msg, stepped) == StepResult::Forwarded) {
      act.enqueues.push_back(std::move(stepped));
    }
    return act;
  }

  const std::vector<NodeId>& targets() const override { return targets_; }
  NodeId source() const override { return source_; }

 private:
  const Graph& g_;
  const Graph& planar_;
  NodeId source_;
  std::vector<NodeId> targets_;
  std::uint64_t session_;
  int ttl_;
};

// Shared machinery for the carried-tree protocols (LGS over the Euclidean
// MST and the source-computed GMP variant over the Steiner tree). The source
// computes the tree once; messages travel its edges by geometric unicast and
// split at every tree waypoint. A virtual waypoint counts as reached when
// the current node has no neighbor closer to it.
class CarriedTreeProtocol : public Protocol {
 public:
  CarriedTreeProtocol(const Graph& g, const Graph& planar, NodeId source,
                      std::vector<NodeId> targets, std::shared_ptr<const Tree> tree,
                      std::uint64_t session, int ttl)
      : g_(g), planar_(planar), source_(source), targets_(std::move(targets)),
        tree_(std::move(tree)), session_(session), ttl_(ttl) {}

  std::vector<RoutingMessage> initial_messages() const override {
    ReceiveActions act;
    emit_branch_legs(source_, 0, *tree_, ttl_, act);
    return std::move(act.enqueues);
  }

  ReceiveActions on_receive(NodeId node, const RoutingMessage& msg,
                            std::span<const RoutingMessage>) const override {
    ReceiveActions act;
    if (!msg.tree || msg.waypoint_tree_index < 0) {
      act.protocol_error = true;
      return act;
    }
    const Tree& t = *msg.tree;

    if (msg.waypoint_node >= 0 && node == msg.waypoint_node) {
      // Reached a real tree node: deliver (all non-root terminals are
      // targets) and split per child subtree.
      act.deliver = true;
      emit_branch_legs(node, msg.waypoint_tree_index, t, decrement_ttl(msg.ttl), act);
      return act;
    }

    RoutingMessage stepped;
    const StepResult res = gfg_unicast_step(g_, planar_, node, msg, stepped);
    if (res == StepResult::Forwarded) {
      act.enqueues.push_back(std::move(stepped));
    } else if (res == StepResult::ArrivedAtVirtual) {
      emit_branch_legs(node, msg.waypoint_tree_index, t, decrement_ttl(msg.ttl), act);
    }
    return act;
  }

  const std::vector<NodeId>& targets() const override { return targets_; }
  NodeId source() const override { return source_; }
  const Tree& tree() const { return *tree_; }

 private:
  NodeId terminal_node(const Tree& t, int idx) const {
    (void)t;
    return idx == 0 ? source_ : targets_[idx - 1];
  }

  // Emits one leg per subtree hanging off tree node `root_idx` away from the
  // source, starting the unicast at graph node `at`. Virtual waypoints the
  // current node has already reached are descended through in place.
  void emit_branch_legs(NodeId at, int root_idx, const Tree& t, int ttl,
                        ReceiveActions& act) const {
    if (ttl != kUnlimitedTtl && ttl <= 0) ttl = 0;  // children die at creation
    const std::vector<int> parent = detail::tree_parents(t, 0);
    std::vector<int> stack;
    for (int v : t.neighbors_of(root_idx)) {
      if (v != parent[root_idx]) stack.push_back(v);
    }
    while (!stack.empty()) {
      const int w = stack.back();
      stack.pop_back();
      const bool is_virtual = t.is_virtual(w);
      if (!is_virtual && terminal_node(t, w) == at) {
        act.deliver = true;  // waypoint coincides with the current node
        for (int v : t.neighbors_of(w)) {
          if (v != parent[w]) stack.push_back(v);
        }
        continue;
      }
      RoutingMessage leg;
      leg.session = session_;
      leg.kind = MsgKind::Greedy;
      leg.source = source_;
      leg.tree = msgTree(t);
      leg.ttl = ttl;
      leg.waypoint = t.node_point(w);
      leg.waypoint_node = is_virtual ? -1 : terminal_node(t, w);
      leg.waypoint_tree_index = w;
      for (int ti : detail::subtree_terminals(t, w, parent[w])) {
        leg.targets.push_back(terminal_node(t, ti));
      }
      leg.sender = at;
      RoutingMessage stepped;
      const StepResult res = gfg_unicast_step(g_, planar_, at, leg, stepped);
      if (res == StepResult::Forwarded) {
        act.enqueues.push_back(std::move(stepped));
      } else if (res == StepResult::ArrivedAtVirtual) {
        for (int v : t.neighbors_of(w)) {
          if (v != parent[w]) stack.push_back(v);
        }
      }
    }
  }

  std::shared_ptr<const Tree> msgTree(const Tree& t) const {
    // Messages normally carry the protocol's own tree; a foreign (but equal)
    // tree keeps statelessness intact.
    return &t == tree_.get() ? tree_ : std::make_shared<const Tree>(t);
  }

  const Graph& g_;
  const Graph& planar_;
  NodeId source_;
  std::vector<NodeId> targets_;
  std::shared_ptr<const Tree> tree_;
  std::uint64_t session_;
  int ttl_;
};

// GMP with the Steiner tree recomputed at every intermediate greedy node, as
// in the original scheme. Messages carry only their remaining target list;
// each greedy custodian recomputes steiner({here} + remaining), partitions
// the targets by the tree edges at its root and forwards one leg per
// partition. Recovery legs stay pinned to their waypoint until greedy
// resumes.
class GmpRecomputeProtocol : public Protocol {
 public:
  GmpRecomputeProtocol(const Graph& g, const Graph& planar, NodeId source,
                       std::vector<NodeId> targets, std::uint64_t session, int ttl)
      : g_(g), planar_(planar), source_(source), targets_(std::move(targets)),
        session_(session), ttl_(ttl) {}

  std::vector<RoutingMessage> initial_messages() const override {
    ReceiveActions act;
    custodian(source_, targets_, ttl_, act);
    return std::move(act.enqueues);
  }

  ReceiveActions on_receive(NodeId node, const RoutingMessage& msg,
                            std::span<const RoutingMessage>) const override {
    ReceiveActions act;
    if (msg.targets.empty()) {
      act.protocol_error = true;
      return act;
    }
    if (msg.kind == MsgKind::Recovery) {
      if (node == msg.waypoint_node) {
        custodian(node, msg.targets, decrement_ttl(msg.ttl), act);
        return act;
      }
      const double here = dist(g_.nodes[node], msg.waypoint);
      if (here >= dist(msg.recovery->entry, msg.waypoint)) {
        RoutingMessage stepped;
        if (gfg_unicast_step(g_, planar_, node, msg, stepped) == StepResult::Forwarded) {
          act.enqueues.push_back(std::move(stepped));
        }
        return act;
      }
      // Strictly closer than the recovery entry: back to greedy custody.
    }
    custodian(node, msg.targets, decrement_ttl(msg.ttl), act);
    return act;
  }

  const std::vector<NodeId>& targets() const override { return targets_; }
  NodeId source() const override { return source_; }

 private:
  // Deliver if the node is itself a remaining target, recompute the Steiner
  // tree over {here} + remaining and emit one leg per root branch. Virtual
  // waypoints already reached are expanded in place.
  void custodian(NodeId at, const std::vector<NodeId>& remaining0, int ttl,
                 ReceiveActions& act) const {
    std::vector<NodeId> remaining = remaining0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      if (remaining[i] == at) {
        act.deliver = true;
        remaining.erase(remaining.begin() + static_cast<long>(i));
        break;
      }
    }
    if (remaining.empty()) return;

    std::vector<Point> pts{g_.nodes[at]};
    for (NodeId t : remaining) pts.push_back(g_.nodes[t]);
    const Tree t = steiner_tree(pts);
    auto node_of = [&](int idx) { return remaining[idx - 1]; };

    const std::vector<int> parent = detail::tree_parents(t, 0);
    std::vector<int> stack;
    for (int v : t.neighbors_of(0)) stack.push_back(v);
    while (!stack.empty()) {
      const int w = stack.back();
      stack.pop_back();
      const bool is_virtual = t.is_virtual(w);
      RoutingMessage leg;
      leg.session = session_;
      leg.kind = MsgKind::Greedy;
      leg.source = source_;
      leg.ttl = ttl;
      leg.waypoint = t.node_point(w);
      leg.waypoint_node = is_virtual ? -1 : node_of(w);
      for (int ti : detail::subtree_terminals(t, w, parent[w])) {
        leg.targets.push_back(node_of(ti));
      }
      leg.sender = at;
      RoutingMessage stepped;
      const StepResult res = gfg_unicast_step(g_, planar_, at, leg, stepped);
      if (res == StepResult::Forwarded) {
        act.enqueues.push_back(std::move(stepped));
      } else if (res == StepResult::ArrivedAtVirtual) {
        for (int v : t.neighbors_of(w)) {
          if (v != parent[w]) stack.push_back(v);
        }
      }
    }
  }

  const Graph& g_;
  const Graph& planar_;
  NodeId source_;
  std::vector<NodeId> targets_;
  std::uint64_t session_;
  int ttl_;
};

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

inline std::shared_ptr<const Tree> multicast_tree(const Graph& g, NodeId source,
                                                  std::span<const NodeId> targets,
                                                  bool steiner) {
  std::vector<Point> pts{g.nodes[source]};
  for (NodeId t : targets) pts.push_back(g.nodes[t]);
  return std::make_shared<const Tree>(steiner ? steiner_tree(pts) : euclidean_mst(pts));
}

inline std::unique_ptr<Protocol> lgs_route(const Graph& g, const Graph& planar,
                                           NodeId source, std::vector<NodeId> targets,
                                           std::uint64_t session, int ttl) {
  auto tree = multicast_tree(g, source, targets, /*steiner=*/false);
  return std::make_unique<CarriedTreeProtocol>(g, planar, source, std::move(targets),
                                               std::move(tree), session, ttl);
}

inline std::unique_ptr<Protocol> gmp_route(const Graph& g, const Graph& planar,
                                           NodeId source, std::vector<NodeId> targets,
                                           std::uint64_t session, int ttl, bool recompute) {
  if (recompute) {
    return std::make_unique<GmpRecomputeProtocol>(g, planar, source, std::move(targets),
                                                  session, ttl);
  }
  auto tree = multicast_tree(g, source, targets, /*steiner=*/true);
  return std::make_unique<CarriedTreeProtocol>(g, planar, source, std::move(targets),
                                               std::move(tree), session, ttl);
}

// Stable public algorithm names used by the CLI and the experiment harness.
inline std::unique_ptr<Protocol> make_protocol(const std::string& name, const Graph& g,
                                               const Graph& planar, NodeId source,
                                               std::vector<NodeId> targets,
                                               std::uint64_t session, int ttl) {
  if (targets.empty()) throw std::invalid_argument("make_protocol: no targets");
  for (NodeId t : targets) {
    if (t == source) throw std::invalid_argument("make_protocol: source cannot be a target");
  }
  if (name == "mcfr-steiner" || name == "mcfr-mst") {
    auto tree = multicast_tree(planar, source, targets, name == "mcfr-steiner");
    return std::make_unique<McfrProtocol>(planar, source, std::move(targets),
                                          std::move(tree), session, ttl);
  }
  if (name == "gfg-unicast") {
    return std::make_unique<GfgUnicastProtocol>(g, planar, source, std::move(targets),
                                                session, ttl);
  }
  if (name == "lgs") return lgs_route(g, planar, source, std::move(targets), session, ttl);
  if (name == "gmp") return gmp_route(g, planar, source, std::move(targets), session, ttl, true);
  if (name == "gmp-source") {
    return gmp_route(g, planar, source, std::move(targets), session, ttl, false);
  }
  throw std::invalid_argument("unknown algorithm: " + name);
}

inline const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"gfg-unicast", "lgs",         "gmp",
                                              "gmp-source",  "mcfr-steiner", "mcfr-mst"};
  return names;
}

}  // namespace georoute
