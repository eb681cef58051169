#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ggn/game.hpp"
#include "ggn/graph.hpp"
#include "ggn/team_game.hpp"

namespace ggn {

// Directed deviation edge: src is the deviating agent, dst the affected one.
// `time` is set only by the dynamic-game builder.
struct GgnEdge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 0.0;
  std::optional<std::int64_t> time;

  friend bool operator==(const GgnEdge&, const GgnEdge&) = default;
};

// Directed signed multigraph of deviation-induced edges. Multi-edges occur
// only in timestamped (dynamic-game) networks; filter_edges collapses them.
struct GgnGraph {
  int node_count = 0;
  std::vector<GgnEdge> edges;
};

enum class DeviationMode {
  best_response,  // ideal strategy from the unilateral argmax
  nash_profile,   // ideal strategy from a pure equilibrium profile
};

struct DeviationModel {
  DeviationMode mode = DeviationMode::best_response;
};

// One deviation network; in nash_profile mode the equilibrium that generated
// it is attached.
struct GeneralGgn {
  GgnGraph network;
  std::optional<StrategyProfile> equilibrium;
};

namespace detail {

// Weights for all ordered pairs: w(e_ij) = u_j(real) - u_j(real with i's
// strategy replaced by ideal[i]). Zero weights are kept; filtering decides
// what survives.
inline GgnGraph deviation_network(const NormalFormGame& game,
                                  const StrategyProfile& real_profile,
                                  const std::vector<int>& ideal) {
  const int n = game.player_count();
  GgnGraph out;
  out.node_count = n;
  out.edges.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int i = 0; i < n; ++i) {
    StrategyProfile deviated = real_profile;
    deviated.choices[i] = ideal[i];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w =
          game.utility(real_profile, j) - game.utility(deviated, j);
      out.edges.push_back({i, j, w, std::nullopt});
    }
  }
  return out;
}

}  // namespace detail

// General deviation networks for a one-shot game outcome. best_response mode
// yields one network; ideal strategies prefer the agent's real strategy when
// it is already a best response, then the lowest index. nash_profile mode
// yields one network per pure equilibrium and fails when none exists.
inline std::vector<GeneralGgn> build_general_ggn(const NormalFormGame& game,
                                                 const StrategyProfile& real_profile,
                                                 const DeviationModel& model) {
  if (!game.valid_profile(real_profile))
    throw std::invalid_argument("invalid real-outcome profile");
  const int n = game.player_count();

  std::vector<GeneralGgn> out;
  if (model.mode == DeviationMode::best_response) {
    std::vector<int> ideal(n);
    for (int i = 0; i < n; ++i) {
      const std::vector<int> br = best_response(game, real_profile, i);
      const int real = real_profile.choices[i];
      ideal[i] = std::find(br.begin(), br.end(), real) != br.end() ? real : br.front();
    }
    out.push_back({detail::deviation_network(game, real_profile, ideal), std::nullopt});
    return out;
  }

  const std::vector<StrategyProfile> equilibria = find_pure_nash(game);
  if (equilibria.empty())
    throw std::runtime_error("nash_profile deviation model: game has no pure-strategy Nash equilibrium");
  for (const StrategyProfile& eq : equilibria)
    out.push_back({detail::deviation_network(game, real_profile, eq.choices), eq});
  return out;
}

// Team-game deviation network. The observer knows only the unsigned skeleton,
// so ideal moves and utilities are computed on it. An agent whose observed
// team is already ideal contributes nothing; otherwise her unilateral move
// changes the utility of exactly the members of her old and new teams, and
// each such member j receives edge i->j weighted u_j(observed) - u_j(deviated).
inline GgnGraph build_team_ggn(const TeamPartition& observed,
                               const SignedGraph& skeleton, double c,
                               double tolerance = 1e-9,
                               TieRule tie_rule = TieRule::current_first) {
  if (observed.node_count() != skeleton.node_count())
    throw std::invalid_argument("partition and skeleton node sets differ");
  if (skeleton.is_directed())
    throw std::invalid_argument("team game skeleton must be undirected");

  const int n = skeleton.node_count();
  const std::map<int, std::vector<NodeId>> members = observed.members();

  GgnGraph out;
  out.node_count = n;
  for (NodeId i = 0; i < n; ++i) {
    const int current = observed.team_of(i);
    const int ideal = best_team_move(i, observed, skeleton, c, tolerance, tie_rule);
    if (ideal == current) continue;

    // For a departed teammate j: u_j(obs) - u_j(dev) = A_ij - c.
    // For a joined teammate j:   u_j(obs) - u_j(dev) = c - A_ij.
    std::vector<std::pair<NodeId, double>> affected;
    for (NodeId j : members.at(current)) {
      if (j == i) continue;
      affected.push_back({j, skeleton.weight(i, j) - c});
    }
    if (auto it = members.find(ideal); it != members.end()) {
      for (NodeId j : it->second) affected.push_back({j, c - skeleton.weight(i, j)});
    }
    std::sort(affected.begin(), affected.end());
    for (const auto& [j, w] : affected) {
      if (w == 0.0) continue;
      out.edges.push_back({i, j, w, std::nullopt});
    }
  }
  return out;
}

// One step of an observed dynamic game: at `time`, `player` switches to
// `new_strategy`.
struct StrategyChange {
  std::int64_t time = 0;
  int player = 0;
  int new_strategy = 0;
};

// Timestamped deviation network for a dynamic game: each observed change
// s -> s' by player i at time t emits edges i->j with weight
// u_j(s') - u_j(s) for every other agent j. Repeated changes accumulate as
// a multigraph.
inline GgnGraph build_dynamic_ggn(const NormalFormGame& game,
                                  const std::vector<StrategyChange>& trace,
                                  const StrategyProfile& initial) {
  if (!game.valid_profile(initial))
    throw std::invalid_argument("invalid initial profile");
  const int n = game.player_count();
  GgnGraph out;
  out.node_count = n;

  StrategyProfile state = initial;
  std::optional<std::int64_t> last_time;
  for (const StrategyChange& change : trace) {
    if (last_time && change.time <= *last_time)
      throw std::invalid_argument("trace times must be strictly increasing");
    last_time = change.time;
    if (change.player < 0 || change.player >= n)
      throw std::invalid_argument("trace player index out of range");
    if (change.new_strategy < 0 ||
        change.new_strategy >= game.strategy_count(change.player))
      throw std::invalid_argument("trace strategy index out of range");

    StrategyProfile next = state;
    next.choices[change.player] = change.new_strategy;
    for (int j = 0; j < n; ++j) {
      if (j == change.player) continue;
      const double w = game.utility(next, j) - game.utility(state, j);
      out.edges.push_back({change.player, j, w, change.time});
    }
    state = std::move(next);
  }
  return out;
}

enum class EdgeAggregate { sum };

// Keeps only edges the observer can interpret: self-loops go, edges between
// non-acquainted agents (pairs absent from the skeleton) go, multi-edges are
// summed per ordered pair (timestamps collapse), and exact-zero weights are
// dropped. Idempotent.
inline GgnGraph filter_edges(const GgnGraph& ggn, const SignedGraph& skeleton,
                             EdgeAggregate aggregate = EdgeAggregate::sum) {
  (void)aggregate;  // single rule: sum
  if (ggn.node_count > skeleton.node_count())
    throw std::invalid_argument("skeleton node set must cover the GGN node set");

  std::map<std::pair<NodeId, NodeId>, double> sums;
  for (const GgnEdge& e : ggn.edges) {
    if (e.src == e.dst) continue;
    if (!skeleton.has_edge(e.src, e.dst)) continue;
    sums[{e.src, e.dst}] += e.weight;
  }
  GgnGraph out;
  out.node_count = ggn.node_count;
  for (const auto& [key, w] : sums) {
    if (w == 0.0) continue;
    out.edges.push_back({key.first, key.second, w, std::nullopt});
  }
  return out;
}

// Edge-list dialect "src dst weight [time]"; src/dst are dense node ids and
// the network is directed.
inline void save_ggn_edge_list(const GgnGraph& ggn, std::ostream& out) {
  out << "# src dst weight [time]  (directed)\n";
  for (const GgnEdge& e : ggn.edges) {
    out << e.src << ' ' << e.dst << ' ' << detail::format_double(e.weight);
    if (e.time) out << ' ' << *e.time;
    out << '\n';
  }
}

inline GgnGraph load_ggn_edge_list(std::istream& in, int node_count) {
  GgnGraph out;
  out.node_count = node_count;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string src, dst, weight, time;
    if (!(ls >> src)) continue;
    if (src[0] == '#' || src[0] == '%') continue;
    if (!(ls >> dst >> weight))
      throw ParseError("expected 'src dst weight [time]'", line_no);
    GgnEdge e;
    try {
      e.src = std::stoi(src);
      e.dst = std::stoi(dst);
    } catch (const std::exception&) {
      throw ParseError("non-numeric node id", line_no);
    }
    if (e.src < 0 || e.src >= node_count || e.dst < 0 || e.dst >= node_count)
      throw ParseError("node id out of range", line_no);
    char* end = nullptr;
    e.weight = std::strtod(weight.c_str(), &end);
    if (end != weight.c_str() + weight.size() || !std::isfinite(e.weight))
      throw ParseError("non-numeric edge weight '" + weight + "'", line_no);
    if (ls >> time) {
      try {
        e.time = std::stoll(time);
      } catch (const std::exception&) {
        throw ParseError("non-numeric timestamp", line_no);
      }
    }
    out.edges.push_back(e);
  }
  return out;
}

}  // namespace ggn
