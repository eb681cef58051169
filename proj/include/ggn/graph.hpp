#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ggn/rng.hpp"

namespace ggn {

// Dense node index in [0, n). External string labels map to these via the
// graph's label table.
using NodeId = std::int32_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct GraphStats {
  std::int64_t nodes = 0;
  std::int64_t edges = 0;
  std::int64_t positive_edges = 0;
  std::int64_t negative_edges = 0;
  std::int64_t zero_weight_edges = 0;
};

// Raised by the edge-list and CSV readers; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Sparse signed graph with real edge weights. Immutable after construction.
//
// Normalization invariants: no self-loops, no duplicate (src, dst) entries
// (duplicates passed to make() are merged by summing), undirected edges are
// stored once with src < dst, edges sorted by (src, dst).
class SignedGraph {
 public:
  SignedGraph() = default;

  static SignedGraph make(int n, bool directed, std::vector<Edge> edges,
                          std::vector<std::string> labels = {}) {
    if (n < 0) throw std::invalid_argument("node count must be >= 0");
    if (!labels.empty() && static_cast<int>(labels.size()) != n)
      throw std::invalid_argument("label table size does not match node count");

    SignedGraph g;
    g.n_ = n;
    g.directed_ = directed;

    std::map<std::pair<NodeId, NodeId>, double> merged;
    for (const Edge& e : edges) {
      if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
        throw std::invalid_argument("edge endpoint out of range");
      if (!std::isfinite(e.weight))
        throw std::invalid_argument("edge weight must be finite");
      if (e.src == e.dst) continue;  // self-loops are dropped
      NodeId a = e.src, b = e.dst;
      if (!directed && a > b) std::swap(a, b);
      merged[{a, b}] += e.weight;
    }
    g.edges_.reserve(merged.size());
    for (const auto& [key, w] : merged) g.edges_.push_back({key.first, key.second, w});

    if (labels.empty()) {
      g.labels_.reserve(n);
      for (int i = 0; i < n; ++i) g.labels_.push_back(std::to_string(i));
    } else {
      g.labels_ = std::move(labels);
    }
    for (NodeId i = 0; i < n; ++i) {
      auto [it, inserted] = g.label_to_id_.emplace(g.labels_[i], i);
      if (!inserted) throw std::invalid_argument("duplicate node label: " + g.labels_[i]);
    }

    g.adjacency_.assign(n, {});
    for (const Edge& e : g.edges_) {
      g.adjacency_[e.src].push_back({e.dst, e.weight});
      g.adjacency_[e.dst].push_back({e.src, e.weight});
    }
    for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
    return g;
  }

  int node_count() const { return n_; }
  bool is_directed() const { return directed_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const std::string& label(NodeId id) const {
    if (id < 0 || id >= n_) throw std::invalid_argument("node id out of range");
    return labels_[id];
  }
  const std::vector<std::string>& labels() const { return labels_; }

  // Dense id for an external label, or -1 when unknown.
  NodeId find_label(const std::string& label) const {
    auto it = label_to_id_.find(label);
    return it == label_to_id_.end() ? NodeId{-1} : it->second;
  }

  // Neighbours of u in the underlying undirected sense (for directed graphs
  // this includes both in- and out-edges), sorted by neighbour id.
  std::span<const std::pair<NodeId, double>> neighbors(NodeId u) const {
    if (u < 0 || u >= n_) throw std::invalid_argument("node id out of range");
    return adjacency_[u];
  }

  int degree(NodeId u) const { return static_cast<int>(neighbors(u).size()); }

  bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v) != nullptr; }

  // Stored weight of (u, v); 0 when the edge is absent. Undirected graphs
  // match either orientation.
  double weight(NodeId u, NodeId v) const {
    const Edge* e = find_edge(u, v);
    return e ? e->weight : 0.0;
  }

 private:
  const Edge* find_edge(NodeId u, NodeId v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_ || u == v) return nullptr;
    NodeId a = u, b = v;
    if (!directed_ && a > b) std::swap(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{a, b},
                               [](const Edge& e, const std::pair<NodeId, NodeId>& key) {
                                 return std::pair{e.src, e.dst} < key;
                               });
    if (it == edges_.end() || it->src != a || it->dst != b) return nullptr;
    return &*it;
  }

  int n_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::map<std::string, NodeId> label_to_id_;
  std::vector<std::vector<std::pair<NodeId, double>>> adjacency_;
};

namespace detail {

// Shortest representation that round-trips a double ("%.17g" always does;
// try shorter forms first so common weights print as "1" or "0.2").
inline std::string format_double(double x) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string with_thousands_separators(std::int64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  const std::size_t first = digits[0] == '-' ? 1 : 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > first && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

}  // namespace detail

// Reads a whitespace-separated edge list: "src dst [weight]" per line, '#'
// and '%' comment lines, missing weight defaults to +1, tokens beyond the
// third are ignored (timestamp columns in KONECT-style files). Labels are
// remapped to dense ids in order of first appearance. Self-loop lines are
// dropped; duplicate (src, dst) lines are summed.
inline SignedGraph load_edge_list(std::istream& in) {
  std::map<std::string, NodeId> ids;
  std::vector<std::string> labels;
  std::vector<std::pair<std::pair<NodeId, NodeId>, double>> raw;

  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string src, dst, weight_token;
    if (!(ls >> src)) continue;  // blank line
    if (src[0] == '#' || src[0] == '%') continue;
    if (!(ls >> dst)) throw ParseError("expected at least two tokens", line_no);
    double w = 1.0;
    if (ls >> weight_token) {
      char* end = nullptr;
      w = std::strtod(weight_token.c_str(), &end);
      if (end != weight_token.c_str() + weight_token.size() || !std::isfinite(w))
        throw ParseError("non-numeric edge weight '" + weight_token + "'", line_no);
    }
    NodeId u = intern(src);
    NodeId v = intern(dst);
    if (u == v) continue;
    raw.push_back({{u, v}, w});
  }

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const auto& [key, w] : raw) edges.push_back({key.first, key.second, w});
  const int n = static_cast<int>(labels.size());
  return SignedGraph::make(n, /*directed=*/true, std::move(edges), std::move(labels));
}

// Writes the same dialect load_edge_list reads; weights keep full round-trip
// precision. Undirected edges are written once.
inline void save_edge_list(const SignedGraph& g, std::ostream& out) {
  for (const Edge& e : g.edges()) {
    out << g.label(e.src) << ' ' << g.label(e.dst) << ' '
        << detail::format_double(e.weight) << '\n';
  }
}

// Collapses directions: the undirected weight of {u, v} is the sum of the two
// directed weights (a missing direction contributes 0). Pairs whose sum is
// exactly zero are dropped. Idempotent on its own output.
inline SignedGraph make_undirected(const SignedGraph& g) {
  std::map<std::pair<NodeId, NodeId>, double> sums;
  for (const Edge& e : g.edges()) {
    NodeId a = e.src, b = e.dst;
    if (a > b) std::swap(a, b);
    sums[{a, b}] += e.weight;
  }
  std::vector<Edge> edges;
  edges.reserve(sums.size());
  for (const auto& [key, w] : sums) {
    if (w == 0.0) continue;
    edges.push_back({key.first, key.second, w});
  }
  return SignedGraph::make(g.node_count(), /*directed=*/false, std::move(edges),
                           g.labels());
}

// Same node and edge set with every weight replaced by +1: the unsigned,
// unweighted acquaintance graph an observer actually sees.
inline SignedGraph to_skeleton(const SignedGraph& g) {
  std::vector<Edge> edges = g.edges();
  for (Edge& e : edges) e.weight = 1.0;
  return SignedGraph::make(g.node_count(), g.is_directed(), std::move(edges),
                           g.labels());
}

enum class SampleMethod { top_degree, bfs_ball };

// Induced subgraph on target_nodes nodes, relabelled to dense ids while
// keeping external labels. top_degree picks the highest-degree nodes (ties by
// id); bfs_ball grows breadth-first from a seeded random start node,
// restarting from the lowest unvisited id if a component is exhausted.
inline SignedGraph sample_subgraph(const SignedGraph& g, int target_nodes,
                                   SampleMethod method, std::uint64_t seed) {
  const int n = g.node_count();
  if (target_nodes <= 0 || target_nodes > n)
    throw std::invalid_argument("target_nodes must be in [1, node_count]");

  std::vector<NodeId> selected;
  selected.reserve(target_nodes);
  if (method == SampleMethod::top_degree) {
    std::vector<NodeId> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      int da = g.degree(a), db = g.degree(b);
      return da != db ? da > db : a < b;
    });
    selected.assign(order.begin(), order.begin() + target_nodes);
  } else {
    Rng rng(seed);
    std::vector<char> visited(n, 0);
    std::queue<NodeId> frontier;
    NodeId start = static_cast<NodeId>(uniform_below(rng, n));
    frontier.push(start);
    visited[start] = 1;
    NodeId next_restart = 0;
    while (static_cast<int>(selected.size()) < target_nodes) {
      if (frontier.empty()) {
        while (visited[next_restart]) ++next_restart;
        visited[next_restart] = 1;
        frontier.push(next_restart);
      }
      NodeId u = frontier.front();
      frontier.pop();
      selected.push_back(u);
      for (const auto& [v, w] : g.neighbors(u)) {
        (void)w;
        if (!visited[v]) {
          visited[v] = 1;
          frontier.push(v);
        }
      }
    }
  }

  std::sort(selected.begin(), selected.end());
  std::vector<NodeId> remap(n, -1);
  std::vector<std::string> labels;
  labels.reserve(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    remap[selected[i]] = static_cast<NodeId>(i);
    labels.push_back(g.label(selected[i]));
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (remap[e.src] >= 0 && remap[e.dst] >= 0)
      edges.push_back({remap[e.src], remap[e.dst], e.weight});
  }
  return SignedGraph::make(target_nodes, g.is_directed(), std::move(edges),
                           std::move(labels));
}

inline GraphStats stats(const SignedGraph& g) {
  GraphStats s;
  s.nodes = g.node_count();
  s.edges = static_cast<std::int64_t>(g.edges().size());
  for (const Edge& e : g.edges()) {
    if (e.weight > 0)
      ++s.positive_edges;
    else if (e.weight < 0)
      ++s.negative_edges;
    else
      ++s.zero_weight_edges;
  }
  return s;
}

// One dataset-statistics row, e.g. "Slashdot1 & 3,869 & 93,498 & 77,052 & 16,446".
inline std::string stats_table_row(const std::string& name, const GraphStats& s) {
  using detail::with_thousands_separators;
  return name + " & " + with_thousands_separators(s.nodes) + " & " +
         with_thousands_separators(s.edges) + " & " +
         with_thousands_separators(s.positive_edges) + " & " +
         with_thousands_separators(s.negative_edges);
}

}  // namespace ggn
