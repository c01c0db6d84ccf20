#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace causalmask {

enum class NodeKind : std::uint8_t { State, Observation, Action, Seed };

char kind_letter(NodeKind kind);
NodeKind kind_from_letter(char letter);

// One coordinate of a time-indexed vector variable. time and index are
// 1-based; Seed nodes exist only at time 1.
struct NodeId {
  NodeKind kind = NodeKind::State;
  int time = 1;
  int index = 1;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline NodeId state_node(int time, int index) { return {NodeKind::State, time, index}; }
inline NodeId obs_node(int time, int index) { return {NodeKind::Observation, time, index}; }
inline NodeId action_node(int time, int index) { return {NodeKind::Action, time, index}; }
inline NodeId seed_node() { return {NodeKind::Seed, 1, 1}; }

std::string node_label(const NodeId& node);

struct GraphDims {
  int d_s = 0;
  int d_o = 0;
  int d_a = 0;

  friend bool operator==(const GraphDims&, const GraphDims&) = default;
};

// Time-unrolled DAG over state/observation/action/seed coordinates. Immutable
// after construction; construction rejects cycles, out-of-range nodes, and
// edges that run backwards in time.
class CausalGraph {
 public:
  using Edge = std::pair<NodeId, NodeId>;

  CausalGraph(GraphDims dims, int horizon, std::vector<Edge> edges);

  const GraphDims& dims() const { return dims_; }
  int horizon() const { return horizon_; }

  bool contains(const NodeId& node) const;
  const std::set<NodeId>& nodes() const { return nodes_; }
  std::vector<Edge> edges() const;
  std::size_t edge_count() const { return edge_count_; }
  bool has_edge(const NodeId& src, const NodeId& dst) const;

  const std::set<NodeId>& parents(const NodeId& node) const;
  const std::set<NodeId>& children(const NodeId& node) const;

  // Topological order, deterministic (NodeId order breaks ties).
  std::vector<NodeId> topological_order() const;

 private:
  void require_node(const NodeId& node) const;
  void check_acyclic() const;

  GraphDims dims_;
  int horizon_ = 0;
  std::set<NodeId> nodes_;
  std::map<NodeId, std::set<NodeId>> parents_;
  std::map<NodeId, std::set<NodeId>> children_;
  std::size_t edge_count_ = 0;
};

// Time-invariant edge template. A TemplateEdge (src, dst, delta) stands for
// src_t -> dst_{t+delta} at every t >= 1 with t+delta <= horizon. Seed edges
// attach W1 to time-1 nodes only.
struct TemplateEdge {
  NodeKind src_kind = NodeKind::State;
  int src_index = 1;
  NodeKind dst_kind = NodeKind::State;
  int dst_index = 1;
  int delta = 0;
};

struct GraphTemplate {
  GraphDims dims;
  std::vector<TemplateEdge> edges;
  std::vector<std::pair<NodeKind, int>> seed_targets;
};

CausalGraph unroll(const GraphTemplate& tmpl, int horizon);

// True iff every path between x and y is blocked by z (chain, fork, collider
// rules; collider descendants via directed reachability).
bool d_separated(const CausalGraph& g, const NodeId& x, const NodeId& y,
                 const std::set<NodeId>& z);

// Graph surgery: drop all edges into each target.
CausalGraph intervene_graph(const CausalGraph& g, const std::set<NodeId>& targets);

// Directed path of length >= 1.
bool has_directed_path(const CausalGraph& g, const NodeId& x, const NodeId& y);

std::set<NodeId> descendants(const CausalGraph& g, const NodeId& node);

nlohmann::json graph_to_json(const CausalGraph& g);
CausalGraph graph_from_json(const nlohmann::json& j);

}  // namespace causalmask
