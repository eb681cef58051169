#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ggn/graph.hpp"
#include "ggn/rng.hpp"

namespace ggn {

// Assignment of every node to exactly one team. Team ids are arbitrary
// non-negative integers; fresh teams are handed out by a monotone counter so
// runs are reproducible.
class TeamPartition {
 public:
  TeamPartition() = default;

  static TeamPartition singletons(int n) {
    TeamPartition p;
    p.assignment_.resize(n);
    for (int i = 0; i < n; ++i) {
      p.assignment_[i] = i;
      p.sizes_.emplace(i, 1);
      p.by_size_.emplace(1, i);
    }
    p.next_team_ = n;
    return p;
  }

  static TeamPartition from_assignment(std::vector<int> assignment) {
    TeamPartition p;
    p.assignment_ = std::move(assignment);
    for (int t : p.assignment_) {
      if (t < 0) throw std::invalid_argument("team ids must be non-negative");
      ++p.sizes_[t];
      p.next_team_ = std::max(p.next_team_, t + 1);
    }
    for (const auto& [t, s] : p.sizes_) p.by_size_.emplace(s, t);
    return p;
  }

  int node_count() const { return static_cast<int>(assignment_.size()); }

  int team_of(NodeId i) const {
    check_node(i);
    return assignment_[i];
  }

  // Current size of a team; 0 for unknown/empty ids.
  int team_size(int team) const {
    auto it = sizes_.find(team);
    return it == sizes_.end() ? 0 : it->second;
  }

  // |t(i)|, counting i herself.
  int node_team_size(NodeId i) const { return team_size(team_of(i)); }

  bool same_team(NodeId i, NodeId j) const { return team_of(i) == team_of(j); }

  int team_count() const { return static_cast<int>(sizes_.size()); }

  // Id a brand-new team would receive.
  int fresh_team_id() const { return next_team_; }

  // Nonempty teams keyed by id.
  const std::map<int, int>& team_sizes() const { return sizes_; }

  // Nonempty teams ordered by (size, id).
  const std::set<std::pair<int, int>>& teams_by_size() const { return by_size_; }

  // Members per team, each list sorted by node id. O(n log n).
  std::map<int, std::vector<NodeId>> members() const {
    std::map<int, std::vector<NodeId>> out;
    for (NodeId i = 0; i < node_count(); ++i) out[assignment_[i]].push_back(i);
    return out;
  }

  const std::vector<int>& assignment() const { return assignment_; }

  void move(NodeId i, int team) {
    check_node(i);
    if (team < 0) throw std::invalid_argument("team ids must be non-negative");
    const int old_team = assignment_[i];
    if (team == old_team) return;
    auto old_it = sizes_.find(old_team);
    by_size_.erase({old_it->second, old_team});
    if (--old_it->second == 0)
      sizes_.erase(old_it);
    else
      by_size_.emplace(old_it->second, old_team);
    auto [new_it, created] = sizes_.emplace(team, 0);
    if (!created) by_size_.erase({new_it->second, team});
    ++new_it->second;
    by_size_.emplace(new_it->second, team);
    assignment_[i] = team;
    next_team_ = std::max(next_team_, team + 1);
  }

 private:
  void check_node(NodeId i) const {
    if (i < 0 || i >= node_count()) throw std::invalid_argument("node id out of range");
  }

  std::vector<int> assignment_;
  std::map<int, int> sizes_;
  std::set<std::pair<int, int>> by_size_;
  int next_team_ = 0;
};

// Signed-weight sum from i to her teammates.
inline double gain(NodeId i, const TeamPartition& p, const SignedGraph& g) {
  if (p.node_count() != g.node_count())
    throw std::invalid_argument("partition does not cover the graph");
  const int team = p.team_of(i);
  double sum = 0.0;
  for (const auto& [j, w] : g.neighbors(i))
    if (p.team_of(j) == team) sum += w;
  return sum;
}

// c times the size of i's team (the size counts i herself).
inline double loss(NodeId i, const TeamPartition& p, double c) {
  return c * p.node_team_size(i);
}

inline double utility(NodeId i, const TeamPartition& p, const SignedGraph& g,
                      double c) {
  return gain(i, p, g) - loss(i, p, c);
}

// Exact potential of the team game: sum over nodes of (gain - loss) / 2. Any
// unilateral move changes this by exactly the mover's utility change.
inline double potential(const TeamPartition& p, const SignedGraph& g, double c) {
  if (p.node_count() != g.node_count())
    throw std::invalid_argument("partition does not cover the graph");
  double phi = 0.0;
  for (NodeId i = 0; i < g.node_count(); ++i)
    phi += 0.5 * (gain(i, p, g) - loss(i, p, c));
  return phi;
}

enum class TieRule {
  current_first,  // keep the current team when tied with the best
  lowest_id,      // lowest team id wins outright
};

namespace detail {

struct MoveChoice {
  int team = 0;           // chosen team (may equal the current team)
  double move_utility = 0.0;
  double stay_utility = 0.0;
};

// Candidate teams are every currently nonempty team plus one fresh empty
// team. Only teams containing neighbours of i can beat the fresh team by
// more than the tolerance, so the scan below touches i's neighbour teams
// plus the cheapest teams in (size, id) order.
inline MoveChoice best_team_move_impl(NodeId i, const TeamPartition& p,
                                      const SignedGraph& g, double c,
                                      double tolerance, TieRule tie_rule) {
  const int current = p.team_of(i);

  std::map<int, double> gain_by_team;
  for (const auto& [j, w] : g.neighbors(i)) gain_by_team[p.team_of(j)] += w;

  double stay_gain = 0.0;
  if (auto it = gain_by_team.find(current); it != gain_by_team.end())
    stay_gain = it->second;
  const double stay_utility = stay_gain - c * p.team_size(current);

  std::vector<std::pair<int, double>> candidates;  // (team, utility if moved)
  candidates.reserve(gain_by_team.size() + 2);
  for (const auto& [team, gsum] : gain_by_team) {
    if (team == current) continue;
    candidates.push_back({team, gsum - c * (p.team_size(team) + 1)});
  }
  candidates.push_back({p.fresh_team_id(), -c});

  double best = stay_utility;
  for (const auto& [team, u] : candidates) best = std::max(best, u);

  // Teams without neighbours of i all have utility -c(size+1); walk them in
  // (size, id) order while they can still tie the running best.
  for (const auto& [size, team] : p.teams_by_size()) {
    const double u = -c * (size + 1);
    if (u < best - tolerance) break;
    if (team == current || gain_by_team.count(team)) continue;
    candidates.push_back({team, u});
    best = std::max(best, u);
  }

  MoveChoice choice;
  choice.stay_utility = stay_utility;
  if (tie_rule == TieRule::current_first && stay_utility >= best - tolerance) {
    choice.team = current;
    choice.move_utility = stay_utility;
    return choice;
  }
  int best_team = -1;
  double best_team_utility = 0.0;
  if (tie_rule == TieRule::lowest_id && stay_utility >= best - tolerance) {
    best_team = current;
    best_team_utility = stay_utility;
  }
  for (const auto& [team, u] : candidates) {
    if (u < best - tolerance) continue;
    if (best_team < 0 || team < best_team) {
      best_team = team;
      best_team_utility = u;
    }
  }
  choice.team = best_team;
  choice.move_utility = best_team_utility;
  return choice;
}

}  // namespace detail

// Team that maximizes i's post-move utility. Candidates: every nonempty team
// plus a fresh empty one. Ties: keep the current team, else lowest team id
// (configurable via tie_rule).
inline int best_team_move(NodeId i, const TeamPartition& p, const SignedGraph& g,
                          double c, double tolerance = 1e-9,
                          TieRule tie_rule = TieRule::current_first) {
  if (p.node_count() != g.node_count())
    throw std::invalid_argument("partition does not cover the graph");
  return detail::best_team_move_impl(i, p, g, c, tolerance, tie_rule).team;
}

struct TeamGameConfig {
  double c = 0.2;
  std::uint64_t seed = 0;
  int max_sweeps = 200;
  double improvement_tolerance = 1e-9;
  TieRule tie_rule = TieRule::current_first;
};

struct SimulateResult {
  TeamPartition partition;
  bool converged = false;
  int sweeps = 0;               // sweeps executed, including the final quiet one
  std::int64_t accepted_moves = 0;
  std::vector<double> potential_trace;  // potential before the run, then after each move
};

// Randomized better-response dynamics: start from singletons, shuffle the
// nodes each sweep, let every node take its best strict improvement (more
// than improvement_tolerance). Converged when a full sweep changes nothing.
// The exact-potential structure guarantees termination; if max_sweeps is
// exhausted anyway the last partition is returned with converged = false.
inline SimulateResult simulate(const SignedGraph& g, const TeamGameConfig& cfg) {
  if (g.is_directed())
    throw std::invalid_argument("team game requires an undirected graph");
  if (cfg.max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
  if (cfg.improvement_tolerance <= 0)
    throw std::invalid_argument("improvement_tolerance must be positive");
  if (cfg.c < 0) throw std::invalid_argument("c must be >= 0");

  const int n = g.node_count();
  SimulateResult result;
  result.partition = TeamPartition::singletons(n);
  result.potential_trace.push_back(potential(result.partition, g, cfg.c));

  Rng rng(cfg.seed);
  std::vector<NodeId> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    shuffle(order, rng);
    std::int64_t changes = 0;
    for (NodeId i : order) {
      const auto choice = detail::best_team_move_impl(
          i, result.partition, g, cfg.c, cfg.improvement_tolerance, cfg.tie_rule);
      if (choice.team == result.partition.team_of(i)) continue;
      if (choice.move_utility - choice.stay_utility <= cfg.improvement_tolerance)
        continue;
      result.partition.move(i, choice.team);
      result.potential_trace.push_back(result.potential_trace.back() +
                                       (choice.move_utility - choice.stay_utility));
      ++changes;
    }
    result.accepted_moves += changes;
    result.sweeps = sweep;
    if (changes == 0) {
      result.converged = true;
      break;
    }
  }
  if (n == 0) result.converged = true;
  return result;
}

// Partition CSV: header "node,team", one row per node in id order.
inline void save_partition_csv(const TeamPartition& p, std::ostream& out) {
  out << "node,team\n";
  for (NodeId i = 0; i < p.node_count(); ++i)
    out << i << ',' << p.team_of(i) << '\n';
}

inline TeamPartition load_partition_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line) || line != "node,team")
    throw ParseError("expected header 'node,team'", 1);
  ++line_no;
  std::vector<std::pair<NodeId, int>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected 'node,team'", line_no);
    try {
      rows.push_back({std::stoi(line.substr(0, comma)),
                      std::stoi(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw ParseError("non-numeric node or team id", line_no);
    }
  }
  std::vector<int> assignment(rows.size(), -1);
  for (const auto& [node, team] : rows) {
    if (node < 0 || node >= static_cast<NodeId>(rows.size()) || assignment[node] != -1)
      throw std::invalid_argument("partition rows must cover each node exactly once");
    assignment[node] = team;
  }
  return TeamPartition::from_assignment(std::move(assignment));
}

}  // namespace ggn
