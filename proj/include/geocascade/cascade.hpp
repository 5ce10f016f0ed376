#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "geocascade/errors.hpp"
#include "geocascade/rgg.hpp"

namespace geocascade {

enum class NodeStatus : std::uint8_t { healthy, attacked, failed };

/// Per-node load bookkeeping. Loads are in units of the initial load.
struct NodeState {
  double load = 1.0;
  double capacity = 1.0;
  NodeStatus status = NodeStatus::healthy;
};

struct CascadeResult {
  std::size_t outside_failures = 0;  // F
  std::size_t outside_total = 0;     // nodes not attacked
  double failure_ratio = 0.0;        // F / outside_total, 0 when nothing is outside
  // stage_failures[0] is the attack itself; entry k counts nodes failing in round k.
  std::vector<std::size_t> stage_failures;
  double lost_load = 0.0;            // load shed by failing nodes with no healthy neighbor
  std::vector<NodeState> nodes;      // final state
  std::vector<int> failure_round;    // round a node failed in, -1 if it survived

  std::size_t rounds() const { return stage_failures.size(); }
};

/// Nodes strictly inside the attack disk; nodes on its border survive.
inline std::vector<NodeId> apply_attack(const Graph& g, double Ra) {
  detail::require(Ra > 0.0, "apply_attack: Ra must be > 0");
  std::vector<NodeId> hit;
  const double ra2 = Ra * Ra;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto& p = g.position(i);
    if (p.x * p.x + p.y * p.y < ra2) hit.push_back(NodeId(i));
  }
  return hit;
}

inline double failure_ratio(std::size_t outside_failures, std::size_t outside_total) {
  if (outside_total == 0) return 0.0;
  return double(outside_failures) / double(outside_total);
}

inline double failure_ratio(const CascadeResult& r) {
  return failure_ratio(r.outside_failures, r.outside_total);
}

namespace detail {

// Fails all of `failing` at once (status set before any load moves, so
// nodes failing together never receive from each other), then splits each
// failing node's whole load equally among its healthy neighbors. Healthy
// nodes that received load are appended to `touched` once per call.
inline void fail_and_redistribute(const Graph& g, std::span<const NodeId> failing,
                                  NodeStatus mark, std::vector<NodeState>& nodes,
                                  std::vector<std::uint32_t>& stamp, std::uint32_t round_tag,
                                  double& lost_load, std::vector<NodeId>& touched) {
  for (NodeId u : failing) nodes[u].status = mark;
  for (NodeId u : failing) {
    std::size_t healthy = 0;
    for (NodeId v : g.neighbors(u)) healthy += nodes[v].status == NodeStatus::healthy;
    const double load = nodes[u].load;
    nodes[u].load = 0.0;
    if (healthy == 0) {
      lost_load += load;
      continue;
    }
    const double share = load / double(healthy);
    for (NodeId v : g.neighbors(u)) {
      if (nodes[v].status != NodeStatus::healthy) continue;
      nodes[v].load += share;
      if (stamp[v] != round_tag) {
        stamp[v] = round_tag;
        touched.push_back(v);
      }
    }
  }
}

inline std::vector<NodeId> unique_sorted(std::span<const NodeId> ids, std::size_t n) {
  std::vector<NodeId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  detail::require(out.empty() || out.back() < n, "attacked node id out of range");
  return out;
}

inline void trace_round(std::ostream& out, std::size_t round, std::span<const NodeId> failing,
                        const std::vector<NodeState>& nodes) {
  out << "round " << round << " failed " << failing.size();
  if (!failing.empty()) out << " :";
  for (NodeId u : failing) out << ' ' << u << ':' << nodes[u].load;
  out << '\n';
}

}  // namespace detail

/// Runs the load-redistribution cascade in synchronous rounds.
///
/// Every node starts with load 1 and capacity alpha. Round 0 fails the
/// attacked nodes; in each later round every healthy node whose load
/// strictly exceeds alpha fails. Failing nodes pass their entire current
/// load, split equally, to neighbors that are healthy and not failing in
/// the same round. Stops after the first round with no new failures.
///
/// When `trace` is set, one line per round is written:
///   round <k> failed <count> : <id>:<load> ...
inline CascadeResult run_cascade(const Graph& g, std::span<const NodeId> attacked, double alpha,
                                 std::ostream* trace = nullptr) {
  detail::require(alpha >= 1.0, "run_cascade: alpha must be >= 1");
  const std::size_t n = g.node_count();

  CascadeResult result;
  result.nodes.assign(n, NodeState{1.0, alpha, NodeStatus::healthy});
  result.failure_round.assign(n, -1);

  std::vector<NodeId> failing = detail::unique_sorted(attacked, n);
  result.outside_total = n - failing.size();

  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<NodeId> touched;
  std::uint32_t round = 0;
  while (!failing.empty() || round == 0) {
    result.stage_failures.push_back(failing.size());
    for (NodeId u : failing) result.failure_round[u] = int(round);
    if (trace) detail::trace_round(*trace, round, failing, result.nodes);
    if (failing.empty()) break;

    touched.clear();
    detail::fail_and_redistribute(g, failing,
                                  round == 0 ? NodeStatus::attacked : NodeStatus::failed,
                                  result.nodes, stamp, round + 1, result.lost_load, touched);
    if (round > 0) result.outside_failures += failing.size();

    failing.clear();
    for (NodeId v : touched) {
      if (result.nodes[v].status == NodeStatus::healthy && result.nodes[v].load > alpha) {
        failing.push_back(v);
      }
    }
    std::sort(failing.begin(), failing.end());
    ++round;
  }
  result.failure_ratio = failure_ratio(result.outside_failures, result.outside_total);
  return result;
}

/// Load each node receives from the attacked nodes in the first
/// redistribution (zero for attacked nodes and for nodes out of reach).
inline std::vector<double> first_round_received_loads(const Graph& g,
                                                      std::span<const NodeId> attacked) {
  const std::size_t n = g.node_count();
  std::vector<NodeState> nodes(n);
  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<NodeId> touched;
  double lost = 0.0;
  const auto failing = detail::unique_sorted(attacked, n);
  detail::fail_and_redistribute(g, failing, NodeStatus::attacked, nodes, stamp, 1, lost, touched);
  std::vector<double> received(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i].status == NodeStatus::healthy) received[i] = nodes[i].load - 1.0;
  }
  return received;
}

}  // namespace geocascade
