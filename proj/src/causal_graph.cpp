#include "causalmask/causal_graph.hpp"

#include <deque>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace causalmask {

namespace {

const std::set<NodeId> kEmptySet;

int kind_dim(const GraphDims& dims, NodeKind kind) {
  switch (kind) {
    case NodeKind::State:
      return dims.d_s;
    case NodeKind::Observation:
      return dims.d_o;
    case NodeKind::Action:
      return dims.d_a;
    case NodeKind::Seed:
      return 1;
  }
  return 0;
}

}  // namespace

char kind_letter(NodeKind kind) {
  switch (kind) {
    case NodeKind::State:
      return 'S';
    case NodeKind::Observation:
      return 'O';
    case NodeKind::Action:
      return 'A';
    case NodeKind::Seed:
      return 'W';
  }
  return '?';
}

NodeKind kind_from_letter(char letter) {
  switch (letter) {
    case 'S':
      return NodeKind::State;
    case 'O':
      return NodeKind::Observation;
    case 'A':
      return NodeKind::Action;
    case 'W':
      return NodeKind::Seed;
    default:
      throw std::invalid_argument(std::string("unknown node kind letter: ") + letter);
  }
}

std::string node_label(const NodeId& node) {
  return std::string(1, kind_letter(node.kind)) + std::to_string(node.time) + "[" +
         std::to_string(node.index) + "]";
}

CausalGraph::CausalGraph(GraphDims dims, int horizon, std::vector<Edge> edges)
    : dims_(dims), horizon_(horizon) {
  if (horizon < 1) throw std::invalid_argument("graph horizon must be >= 1");
  if (dims.d_s < 0 || dims.d_o < 0 || dims.d_a < 0)
    throw std::invalid_argument("graph dims must be nonnegative");

  auto add_kind = [&](NodeKind kind) {
    const int d = kind_dim(dims_, kind);
    for (int t = 1; t <= horizon_; ++t) {
      for (int i = 1; i <= d; ++i) nodes_.insert({kind, t, i});
    }
  };
  add_kind(NodeKind::State);
  add_kind(NodeKind::Observation);
  add_kind(NodeKind::Action);
  nodes_.insert(seed_node());

  for (const auto& node : nodes_) {
    parents_[node];
    children_[node];
  }

  for (const auto& [src, dst] : edges) {
    require_node(src);
    require_node(dst);
    if (dst.time < src.time)
      throw std::invalid_argument("edge runs backwards in time: " + node_label(src) + " -> " +
                                  node_label(dst));
    if (src == dst) throw std::invalid_argument("self edge on " + node_label(src));
    if (children_[src].insert(dst).second) {
      parents_[dst].insert(src);
      ++edge_count_;
    }
  }

  check_acyclic();
}

void CausalGraph::require_node(const NodeId& node) const {
  if (node.time < 1 || node.time > horizon_)
    throw std::invalid_argument("node time out of range: " + node_label(node));
  if (node.kind == NodeKind::Seed && node.time != 1)
    throw std::invalid_argument("seed nodes exist only at time 1");
  const int d = kind_dim(dims_, node.kind);
  if (node.index < 1 || node.index > d)
    throw std::invalid_argument("node index out of range: " + node_label(node));
}

bool CausalGraph::contains(const NodeId& node) const { return nodes_.count(node) > 0; }

std::vector<CausalGraph::Edge> CausalGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (const auto& [src, kids] : children_) {
    for (const auto& dst : kids) out.emplace_back(src, dst);
  }
  return out;
}

bool CausalGraph::has_edge(const NodeId& src, const NodeId& dst) const {
  auto it = children_.find(src);
  return it != children_.end() && it->second.count(dst) > 0;
}

const std::set<NodeId>& CausalGraph::parents(const NodeId& node) const {
  auto it = parents_.find(node);
  if (it == parents_.end()) throw std::invalid_argument("unknown node: " + node_label(node));
  return it->second;
}

const std::set<NodeId>& CausalGraph::children(const NodeId& node) const {
  auto it = children_.find(node);
  if (it == children_.end()) throw std::invalid_argument("unknown node: " + node_label(node));
  return it->second;
}

std::vector<NodeId> CausalGraph::topological_order() const {
  std::map<NodeId, int> indegree;
  for (const auto& node : nodes_) indegree[node] = static_cast<int>(parents_.at(node).size());

  std::set<NodeId> ready;
  for (const auto& [node, deg] : indegree) {
    if (deg == 0) ready.insert(node);
  }

  std::vector<NodeId> order;
  order.reserve(nodes_.size());
  while (!ready.empty()) {
    NodeId node = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(node);
    for (const auto& child : children_.at(node)) {
      if (--indegree[child] == 0) ready.insert(child);
    }
  }
  if (order.size() != nodes_.size()) throw std::invalid_argument("graph contains a cycle");
  return order;
}

void CausalGraph::check_acyclic() const { (void)topological_order(); }

CausalGraph unroll(const GraphTemplate& tmpl, int horizon) {
  if (horizon < 1) throw std::invalid_argument("unroll horizon must be >= 1");
  std::vector<CausalGraph::Edge> edges;
  for (const auto& e : tmpl.edges) {
    if (e.delta < 0) throw std::invalid_argument("template edge delta must be >= 0");
    if (e.src_kind == NodeKind::Seed || e.dst_kind == NodeKind::Seed)
      throw std::invalid_argument("seed edges belong in seed_targets");
    for (int t = 1; t + e.delta <= horizon; ++t) {
      edges.push_back({{e.src_kind, t, e.src_index}, {e.dst_kind, t + e.delta, e.dst_index}});
    }
  }
  for (const auto& [kind, index] : tmpl.seed_targets) {
    edges.push_back({seed_node(), {kind, 1, index}});
  }
  return CausalGraph(tmpl.dims, horizon, std::move(edges));
}

namespace {

// Ancestors of z (z included): nodes with a directed path into z.
std::set<NodeId> ancestors_of_set(const CausalGraph& g, const std::set<NodeId>& z) {
  std::set<NodeId> anc = z;
  std::deque<NodeId> queue(z.begin(), z.end());
  while (!queue.empty()) {
    NodeId node = queue.front();
    queue.pop_front();
    for (const auto& p : g.parents(node)) {
      if (anc.insert(p).second) queue.push_back(p);
    }
  }
  return anc;
}

}  // namespace

std::set<NodeId> descendants(const CausalGraph& g, const NodeId& node) {
  std::set<NodeId> desc;
  std::deque<NodeId> queue;
  for (const auto& c : g.children(node)) {
    if (desc.insert(c).second) queue.push_back(c);
  }
  while (!queue.empty()) {
    NodeId cur = queue.front();
    queue.pop_front();
    for (const auto& c : g.children(cur)) {
      if (desc.insert(c).second) queue.push_back(c);
    }
  }
  return desc;
}

bool d_separated(const CausalGraph& g, const NodeId& x, const NodeId& y,
                 const std::set<NodeId>& z) {
  if (!g.contains(x)) throw std::invalid_argument("unknown node: " + node_label(x));
  if (!g.contains(y)) throw std::invalid_argument("unknown node: " + node_label(y));
  for (const auto& node : z) {
    if (!g.contains(node)) throw std::invalid_argument("unknown node: " + node_label(node));
  }
  if (x == y) throw std::invalid_argument("d_separated requires x != y");
  if (z.count(x) || z.count(y)) throw std::invalid_argument("x and y must not be in z");

  // Active-trail reachability. Direction Up means the trail enters the node
  // from a child (travelling against an edge), Down means from a parent.
  const std::set<NodeId> opens_collider = ancestors_of_set(g, z);

  enum Dir { Up = 0, Down = 1 };
  std::set<std::pair<NodeId, int>> visited;
  std::deque<std::pair<NodeId, int>> queue;
  queue.push_back({x, Up});

  while (!queue.empty()) {
    auto [node, dir] = queue.front();
    queue.pop_front();
    if (!visited.insert({node, dir}).second) continue;
    if (node == y) return false;

    if (dir == Up) {
      if (z.count(node)) continue;
      for (const auto& p : g.parents(node)) queue.push_back({p, Up});
      for (const auto& c : g.children(node)) queue.push_back({c, Down});
    } else {
      if (!z.count(node)) {
        for (const auto& c : g.children(node)) queue.push_back({c, Down});
      }
      if (opens_collider.count(node)) {
        for (const auto& p : g.parents(node)) queue.push_back({p, Up});
      }
    }
  }
  return true;
}

CausalGraph intervene_graph(const CausalGraph& g, const std::set<NodeId>& targets) {
  for (const auto& node : targets) {
    if (!g.contains(node)) throw std::invalid_argument("unknown node: " + node_label(node));
  }
  std::vector<CausalGraph::Edge> kept;
  for (const auto& [src, dst] : g.edges()) {
    if (!targets.count(dst)) kept.emplace_back(src, dst);
  }
  return CausalGraph(g.dims(), g.horizon(), std::move(kept));
}

bool has_directed_path(const CausalGraph& g, const NodeId& x, const NodeId& y) {
  if (!g.contains(x)) throw std::invalid_argument("unknown node: " + node_label(x));
  if (!g.contains(y)) throw std::invalid_argument("unknown node: " + node_label(y));
  return descendants(g, x).count(y) > 0;
}

nlohmann::json graph_to_json(const CausalGraph& g) {
  nlohmann::json j;
  j["dims"] = {g.dims().d_s, g.dims().d_o, g.dims().d_a};
  j["horizon"] = g.horizon();
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [src, dst] : g.edges()) {
    edges.push_back({std::string(1, kind_letter(src.kind)), src.time, src.index,
                     std::string(1, kind_letter(dst.kind)), dst.time, dst.index});
  }
  j["edges"] = std::move(edges);
  return j;
}

CausalGraph graph_from_json(const nlohmann::json& j) {
  GraphDims dims{j.at("dims").at(0).get<int>(), j.at("dims").at(1).get<int>(),
                 j.at("dims").at(2).get<int>()};
  const int horizon = j.at("horizon").get<int>();
  std::vector<CausalGraph::Edge> edges;
  for (const auto& e : j.at("edges")) {
    NodeId src{kind_from_letter(e.at(0).get<std::string>().at(0)), e.at(1).get<int>(),
               e.at(2).get<int>()};
    NodeId dst{kind_from_letter(e.at(3).get<std::string>().at(0)), e.at(4).get<int>(),
               e.at(5).get<int>()};
    edges.emplace_back(src, dst);
  }
  return CausalGraph(dims, horizon, std::move(edges));
}

}  // namespace causalmask
