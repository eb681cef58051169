#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace ggn {

// Payoffs are reals; ties between them are detected with an absolute
// tolerance since example payoffs are small integers.
inline constexpr double kPayoffTieTolerance = 1e-12;

struct StrategyProfile {
  std::vector<int> choices;  // one strategy index per player

  friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
};

// Finite normal-form game: n players, per-player finite strategy sets and a
// payoff tensor defined on the full product space.
class NormalFormGame {
 public:
  NormalFormGame() = default;

  explicit NormalFormGame(std::vector<int> strategy_counts,
                          std::vector<std::vector<std::string>> strategy_names = {})
      : counts_(std::move(strategy_counts)), names_(std::move(strategy_names)) {
    if (counts_.empty()) throw std::invalid_argument("game needs at least one player");
    std::size_t profiles = 1;
    for (int c : counts_) {
      if (c <= 0) throw std::invalid_argument("strategy counts must be positive");
      if (profiles > kMaxPayoffCells / static_cast<std::size_t>(c))
        throw std::length_error("strategy space too large");
      profiles *= static_cast<std::size_t>(c);
    }
    if (names_.empty()) {
      names_.resize(counts_.size());
      for (std::size_t p = 0; p < counts_.size(); ++p)
        for (int s = 0; s < counts_[p]; ++s) names_[p].push_back(std::to_string(s));
    }
    if (names_.size() != counts_.size())
      throw std::invalid_argument("strategy name table does not match player count");
    for (std::size_t p = 0; p < counts_.size(); ++p)
      if (static_cast<int>(names_[p].size()) != counts_[p])
        throw std::invalid_argument("strategy name table does not match strategy count");
    payoffs_.assign(profiles * counts_.size(), 0.0);
  }

  int player_count() const { return static_cast<int>(counts_.size()); }
  const std::vector<int>& strategy_counts() const { return counts_; }
  int strategy_count(int player) const {
    check_player(player);
    return counts_[player];
  }
  const std::string& strategy_name(int player, int strategy) const {
    check_player(player);
    if (strategy < 0 || strategy >= counts_[player])
      throw std::invalid_argument("strategy index out of range");
    return names_[player][strategy];
  }

  // Strategy index for a named strategy of `player`, or -1.
  int find_strategy(int player, const std::string& name) const {
    check_player(player);
    const auto& row = names_[player];
    auto it = std::find(row.begin(), row.end(), name);
    return it == row.end() ? -1 : static_cast<int>(it - row.begin());
  }

  std::size_t profile_count() const { return payoffs_.size() / counts_.size(); }

  bool valid_profile(const StrategyProfile& s) const {
    if (s.choices.size() != counts_.size()) return false;
    for (std::size_t p = 0; p < counts_.size(); ++p)
      if (s.choices[p] < 0 || s.choices[p] >= counts_[p]) return false;
    return true;
  }

  double utility(const StrategyProfile& s, int player) const {
    check_player(player);
    return payoffs_[index_of(s) * counts_.size() + player];
  }

  void set_payoffs(const StrategyProfile& s, const std::vector<double>& per_player) {
    if (per_player.size() != counts_.size())
      throw std::invalid_argument("payoff vector does not match player count");
    const std::size_t base = index_of(s) * counts_.size();
    for (std::size_t p = 0; p < per_player.size(); ++p) {
      if (!std::isfinite(per_player[p]))
        throw std::invalid_argument("payoffs must be finite");
      payoffs_[base + p] = per_player[p];
    }
  }

  // Profiles are ordered lexicographically by (choices[0], choices[1], ...).
  StrategyProfile profile_at(std::size_t index) const {
    StrategyProfile s;
    s.choices.assign(counts_.size(), 0);
    for (std::size_t p = counts_.size(); p-- > 0;) {
      s.choices[p] = static_cast<int>(index % counts_[p]);
      index /= counts_[p];
    }
    return s;
  }

 private:
  static constexpr std::size_t kMaxPayoffCells = 100'000'000;

  void check_player(int player) const {
    if (player < 0 || player >= player_count())
      throw std::invalid_argument("player index out of range");
  }

  std::size_t index_of(const StrategyProfile& s) const {
    if (!valid_profile(s)) throw std::invalid_argument("invalid strategy profile");
    std::size_t idx = 0;
    for (std::size_t p = 0; p < counts_.size(); ++p)
      idx = idx * counts_[p] + static_cast<std::size_t>(s.choices[p]);
    return idx;
  }

  std::vector<int> counts_;
  std::vector<std::vector<std::string>> names_;
  std::vector<double> payoffs_;  // profile-major, then player
};

// All strategies of `player` that maximize her utility with the other
// coordinates of `profile` held fixed. Never empty; sorted ascending.
inline std::vector<int> best_response(const NormalFormGame& game,
                                      const StrategyProfile& profile, int player) {
  if (!game.valid_profile(profile))
    throw std::invalid_argument("invalid strategy profile");
  StrategyProfile probe = profile;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> utilities(game.strategy_count(player));
  for (int s = 0; s < game.strategy_count(player); ++s) {
    probe.choices[player] = s;
    utilities[s] = game.utility(probe, player);
    best = std::max(best, utilities[s]);
  }
  std::vector<int> argmax;
  for (int s = 0; s < game.strategy_count(player); ++s)
    if (utilities[s] >= best - kPayoffTieTolerance) argmax.push_back(s);
  return argmax;
}

// Exhaustive pure-equilibrium enumeration in lexicographic profile order.
// Guarded: refuses strategy spaces above one million profiles.
inline std::vector<StrategyProfile> find_pure_nash(const NormalFormGame& game) {
  if (game.profile_count() > 1'000'000)
    throw std::length_error("strategy space too large to enumerate");
  std::vector<StrategyProfile> equilibria;
  for (std::size_t idx = 0; idx < game.profile_count(); ++idx) {
    StrategyProfile s = game.profile_at(idx);
    bool stable = true;
    for (int p = 0; p < game.player_count() && stable; ++p) {
      const double own = game.utility(s, p);
      StrategyProfile probe = s;
      for (int alt = 0; alt < game.strategy_count(p); ++alt) {
        probe.choices[p] = alt;
        if (game.utility(probe, p) > own + kPayoffTieTolerance) {
          stable = false;
          break;
        }
      }
    }
    if (stable) equilibria.push_back(std::move(s));
  }
  return equilibria;
}

// The two-criminal quiet/squeal game. The mutual-quiet payoff is a
// configurable convention (-1 by default); every other cell is pinned by the
// story: squealing alone walks free, the other side serves 5 years, mutual
// squealing serves 4.
inline NormalFormGame prisoners_dilemma(double mutual_quiet_payoff = -1.0) {
  NormalFormGame game({2, 2}, {{"Q", "S"}, {"Q", "S"}});
  const int Q = 0, S = 1;
  game.set_payoffs({{Q, Q}}, {mutual_quiet_payoff, mutual_quiet_payoff});
  game.set_payoffs({{Q, S}}, {-5.0, 0.0});
  game.set_payoffs({{S, Q}}, {0.0, -5.0});
  game.set_payoffs({{S, S}}, {-4.0, -4.0});
  return game;
}

namespace detail {

inline void fill_payoffs_from_json(NormalFormGame& game, const nlohmann::json& node,
                                   StrategyProfile& prefix, int depth) {
  if (depth == game.player_count()) {
    if (!node.is_array() || static_cast<int>(node.size()) != game.player_count())
      throw std::invalid_argument("payoff leaf must list one payoff per player");
    std::vector<double> per_player;
    for (const auto& v : node) {
      if (!v.is_number()) throw std::invalid_argument("payoffs must be numbers");
      per_player.push_back(v.get<double>());
    }
    game.set_payoffs(prefix, per_player);
    return;
  }
  if (!node.is_array() ||
      static_cast<int>(node.size()) != game.strategy_count(depth))
    throw std::invalid_argument("payoff nesting does not match strategy counts");
  for (int s = 0; s < game.strategy_count(depth); ++s) {
    prefix.choices[depth] = s;
    fill_payoffs_from_json(game, node[s], prefix, depth + 1);
  }
}

}  // namespace detail

// Game description document: {"players": n, "strategies": [[names...] per
// player], "payoffs": nested arrays indexed by strategy indices, innermost
// entry = per-player payoffs}.
inline NormalFormGame game_from_json(const nlohmann::json& doc) {
  if (!doc.contains("players") || !doc.contains("strategies") || !doc.contains("payoffs"))
    throw std::invalid_argument("game document needs players, strategies, payoffs");
  const int players = doc.at("players").get<int>();
  const auto& strategies = doc.at("strategies");
  if (!strategies.is_array() || static_cast<int>(strategies.size()) != players)
    throw std::invalid_argument("strategies must list one name array per player");
  std::vector<int> counts;
  std::vector<std::vector<std::string>> names;
  for (const auto& row : strategies) {
    names.push_back(row.get<std::vector<std::string>>());
    if (names.back().empty())
      throw std::invalid_argument("each player needs at least one strategy");
    counts.push_back(static_cast<int>(names.back().size()));
  }
  NormalFormGame game(std::move(counts), std::move(names));
  StrategyProfile prefix;
  prefix.choices.assign(players, 0);
  detail::fill_payoffs_from_json(game, doc.at("payoffs"), prefix, 0);
  return game;
}

inline nlohmann::json game_to_json(const NormalFormGame& game) {
  nlohmann::json doc;
  doc["players"] = game.player_count();
  nlohmann::json strategies = nlohmann::json::array();
  for (int p = 0; p < game.player_count(); ++p) {
    nlohmann::json row = nlohmann::json::array();
    for (int s = 0; s < game.strategy_count(p); ++s) row.push_back(game.strategy_name(p, s));
    strategies.push_back(row);
  }
  doc["strategies"] = strategies;

  // Build the nested payoff arrays back-to-front over the profile index.
  std::function<nlohmann::json(StrategyProfile&, int)> build =
      [&](StrategyProfile& prefix, int depth) -> nlohmann::json {
    nlohmann::json arr = nlohmann::json::array();
    if (depth == game.player_count()) {
      for (int p = 0; p < game.player_count(); ++p) arr.push_back(game.utility(prefix, p));
      return arr;
    }
    for (int s = 0; s < game.strategy_count(depth); ++s) {
      prefix.choices[depth] = s;
      arr.push_back(build(prefix, depth + 1));
    }
    return arr;
  };
  StrategyProfile prefix;
  prefix.choices.assign(game.player_count(), 0);
  doc["payoffs"] = build(prefix, 0);
  return doc;
}

}  // namespace ggn
