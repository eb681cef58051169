#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ggn/ggn.hpp"
#include "ggn/graph.hpp"
#include "ggn/inference.hpp"
#include "ggn/team_game.hpp"

namespace ggn {

enum class AccuracyScope {
  predicted_only,  // score only edges that received a nonzero prediction
  all_edges,       // unpredicted edges count against their class
};

// Balanced accuracy: per-class accuracy over truth-positive and
// truth-negative edges, averaged with equal class weight. Undefined
// (nullopt) when a class has no members to score against.
inline std::optional<double> average_accuracy(
    const PredictionSet& pred, const SignedGraph& truth,
    AccuracyScope scope = AccuracyScope::predicted_only) {
  std::int64_t pos_total = 0, neg_total = 0, pos_correct = 0, neg_correct = 0;
  for (const Prediction& p : pred.predictions) {
    if (!truth.has_edge(p.u, p.v))
      throw std::invalid_argument("predicted edge missing from ground truth");
    const double w = truth.weight(p.u, p.v);
    if (w > 0) {
      ++pos_total;
      if (p.sign > 0) ++pos_correct;
    } else if (w < 0) {
      ++neg_total;
      if (p.sign < 0) ++neg_correct;
    }
    // zero-weight truth edges belong to neither class
  }
  if (scope == AccuracyScope::all_edges) {
    pos_total = neg_total = 0;
    for (const Edge& e : truth.edges()) {
      if (e.weight > 0) ++pos_total;
      if (e.weight < 0) ++neg_total;
    }
  }
  if (pos_total == 0 || neg_total == 0) return std::nullopt;
  return 0.5 * (static_cast<double>(pos_correct) / pos_total +
                static_cast<double>(neg_correct) / neg_total);
}

// Fraction of skeleton edges that received any prediction.
inline double predictive_percentage(const PredictionSet& pred,
                                    const SignedGraph& skeleton) {
  if (skeleton.edges().empty())
    throw std::invalid_argument("skeleton has no edges");
  if (pred.universe_edges != skeleton.edges().size())
    throw std::invalid_argument("prediction universe does not match skeleton");
  return static_cast<double>(pred.predictions.size()) /
         static_cast<double>(skeleton.edges().size());
}

// Edges predicted at a lower order that lost their prediction at a higher
// one (exact score cancellation).
inline int count_dropped_predictions(const PredictionSet& lower,
                                     const PredictionSet& higher) {
  std::vector<std::pair<NodeId, NodeId>> have;
  have.reserve(higher.predictions.size());
  for (const Prediction& p : higher.predictions) have.push_back({p.u, p.v});
  int dropped = 0;
  for (const Prediction& p : lower.predictions)
    if (!std::binary_search(have.begin(), have.end(), std::pair{p.u, p.v})) ++dropped;
  return dropped;
}

struct ExperimentConfig {
  std::string dataset = "dataset";
  SignedGraph ground_truth;  // undirected signed network G'
  std::vector<double> c_values{0.2};
  std::vector<int> k_values{2};
  int runs = 5;
  std::uint64_t base_seed = 0;
  bool symmetrize = true;
  AccuracyScope accuracy_scope = AccuracyScope::predicted_only;
  int max_sweeps = 200;
  double improvement_tolerance = 1e-9;
  TieRule tie_rule = TieRule::current_first;
  int jobs = 1;
};

struct RunResult {
  std::string dataset;
  double c = 0.0;
  int k = 0;
  int run = 0;
  std::uint64_t seed = 0;
  std::optional<double> average_accuracy;   // nullopt: undefined (flagged)
  std::optional<double> predictive_pct;     // nullopt only for failed runs
  int sweeps = 0;
  bool converged = false;
  double runtime_seconds = 0.0;
};

struct SummaryCell {
  std::string dataset;
  double c = 0.0;
  int k = 0;
  int runs = 0;
  int failed_runs = 0;             // simulation did not converge
  int excluded_accuracy = 0;       // runs without a defined accuracy
  std::optional<double> accuracy_mean, accuracy_std;
  std::optional<double> predictive_mean, predictive_std;
};

struct Summary {
  std::vector<SummaryCell> cells;  // sorted by (dataset, c, k)
};

struct ExperimentOutput {
  std::vector<RunResult> results;  // sorted by (dataset, c, k, run)
  Summary summary;
};

namespace detail {

struct MeanStd {
  std::optional<double> mean, std;
  int used = 0;
};

inline MeanStd mean_and_sample_std(const std::vector<double>& xs) {
  MeanStd out;
  out.used = static_cast<int>(xs.size());
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / xs.size();
  out.mean = mean;
  if (xs.size() == 1) {
    out.std = 0.0;  // convention for a single run
    return out;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  out.std = std::sqrt(ss / (xs.size() - 1));
  return out;
}

}  // namespace detail

// Per-(dataset, c, k) mean and sample standard deviation; undefined runs are
// excluded and counted instead of imputed.
inline Summary aggregate(const std::vector<RunResult>& results) {
  if (results.empty()) throw std::invalid_argument("no run results to aggregate");
  std::map<std::tuple<std::string, double, int>, std::vector<const RunResult*>> groups;
  for (const RunResult& r : results)
    groups[{r.dataset, r.c, r.k}].push_back(&r);

  Summary summary;
  for (const auto& [key, rs] : groups) {
    SummaryCell cell;
    cell.dataset = std::get<0>(key);
    cell.c = std::get<1>(key);
    cell.k = std::get<2>(key);
    cell.runs = static_cast<int>(rs.size());
    std::vector<double> accs, pps;
    for (const RunResult* r : rs) {
      if (!r->converged) ++cell.failed_runs;
      if (r->average_accuracy)
        accs.push_back(*r->average_accuracy);
      else
        ++cell.excluded_accuracy;
      if (r->predictive_pct) pps.push_back(*r->predictive_pct);
    }
    const auto acc = detail::mean_and_sample_std(accs);
    const auto pp = detail::mean_and_sample_std(pps);
    cell.accuracy_mean = acc.mean;
    cell.accuracy_std = acc.std;
    cell.predictive_mean = pp.mean;
    cell.predictive_std = pp.std;
    summary.cells.push_back(std::move(cell));
  }
  return summary;
}

// Full pipeline of one experiment: per (c, run), simulate the team game on
// the signed ground truth, build and filter the deviation network against
// the unsigned skeleton, then score every requested kernel order against the
// ground truth. Seeds are base_seed + run, so repetitions are reproducible
// yet distinct. jobs > 1 parallelizes over (c, run) tasks; results are
// identical to a single-threaded run because tasks are independent.
inline ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (cfg.ground_truth.is_directed())
    throw std::invalid_argument("ground truth must be undirected");
  for (double c : cfg.c_values)
    if (c < 0) throw std::invalid_argument("c must be >= 0");
  for (int k : cfg.k_values)
    if (k < 0 || k > kMaxKernelOrder)
      throw std::invalid_argument("kernel order must be in [0, 12]");

  const SignedGraph skeleton = to_skeleton(cfg.ground_truth);
  struct Task {
    double c;
    int run;
  };
  std::vector<Task> tasks;
  for (double c : cfg.c_values)
    for (int run = 0; run < cfg.runs; ++run) tasks.push_back({c, run});

  std::vector<std::vector<RunResult>> per_task(tasks.size());
  auto execute = [&](std::size_t t) {
    const auto& task = tasks[t];
    const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(task.run);

    const auto sim_start = std::chrono::steady_clock::now();
    TeamGameConfig game_cfg;
    game_cfg.c = task.c;
    game_cfg.seed = seed;
    game_cfg.max_sweeps = cfg.max_sweeps;
    game_cfg.improvement_tolerance = cfg.improvement_tolerance;
    game_cfg.tie_rule = cfg.tie_rule;
    const SimulateResult sim = simulate(cfg.ground_truth, game_cfg);

    GgnGraph ggn;
    if (sim.converged) {
      ggn = filter_edges(build_team_ggn(sim.partition, skeleton, task.c,
                                        cfg.improvement_tolerance, cfg.tie_rule),
                         skeleton);
    }
    const double shared_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - sim_start)
            .count();

    const ScoreMatrix adjacency = ScoreMatrix::from_ggn(ggn);
    for (int k : cfg.k_values) {
      RunResult r;
      r.dataset = cfg.dataset;
      r.c = task.c;
      r.k = k;
      r.run = task.run;
      r.seed = seed;
      r.sweeps = sim.sweeps;
      r.converged = sim.converged;
      const auto k_start = std::chrono::steady_clock::now();
      if (sim.converged) {
        const ScoreMatrix kernel = exponential_kernel(adjacency, k);
        const PredictionSet pred = predict_signs(kernel, skeleton, cfg.symmetrize);
        r.predictive_pct = predictive_percentage(pred, skeleton);
        r.average_accuracy =
            average_accuracy(pred, cfg.ground_truth, cfg.accuracy_scope);
      }
      r.runtime_seconds =
          shared_seconds +
          std::chrono::duration<double>(std::chrono::steady_clock::now() - k_start)
              .count();
      per_task[t].push_back(std::move(r));
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || tasks.size() <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) execute(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int worker_count = std::min<std::size_t>(jobs, tasks.size());
    workers.reserve(worker_count);
    for (int w = 0; w < worker_count; ++w)
      workers.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < tasks.size();
             t = next.fetch_add(1))
          execute(t);
      });
    for (auto& th : workers) th.join();
  }

  ExperimentOutput out;
  for (auto& rs : per_task)
    for (auto& r : rs) out.results.push_back(std::move(r));
  std::sort(out.results.begin(), out.results.end(),
            [](const RunResult& a, const RunResult& b) {
              return std::tie(a.dataset, a.c, a.k, a.run) <
                     std::tie(b.dataset, b.c, b.k, b.run);
            });
  out.summary = aggregate(out.results);
  return out;
}

// Results CSV consumed by external plotting.
inline void save_results_csv(const std::vector<RunResult>& results,
                             std::ostream& out) {
  out << "dataset,c,k,run,seed,avg_accuracy,predictive_pct,sweeps,runtime_s\n";
  for (const RunResult& r : results) {
    out << r.dataset << ',' << detail::format_double(r.c) << ',' << r.k << ','
        << r.run << ',' << r.seed << ',';
    if (r.average_accuracy)
      out << detail::format_double(*r.average_accuracy);
    else
      out << "nan";
    out << ',';
    if (r.predictive_pct)
      out << detail::format_double(*r.predictive_pct);
    else
      out << "nan";
    char runtime[32];
    std::snprintf(runtime, sizeof runtime, "%.6f", r.runtime_seconds);
    out << ',' << r.sweeps << ',' << runtime << '\n';
  }
}

// Nested {dataset -> c -> k -> {metric: {mean, std, excluded}, runs, failed}}.
inline nlohmann::json summary_to_json(const Summary& summary) {
  nlohmann::json doc = nlohmann::json::object();
  for (const SummaryCell& cell : summary.cells) {
    nlohmann::json& slot =
        doc[cell.dataset][detail::format_double(cell.c)][std::to_string(cell.k)];
    auto metric = [](const std::optional<double>& mean,
                     const std::optional<double>& std_dev, int excluded) {
      nlohmann::json m;
      m["mean"] = mean ? nlohmann::json(*mean) : nlohmann::json(nullptr);
      m["std"] = std_dev ? nlohmann::json(*std_dev) : nlohmann::json(nullptr);
      m["excluded"] = excluded;
      return m;
    };
    slot["avg_accuracy"] =
        metric(cell.accuracy_mean, cell.accuracy_std, cell.excluded_accuracy);
    slot["predictive_pct"] =
        metric(cell.predictive_mean, cell.predictive_std, cell.failed_runs);
    slot["runs"] = cell.runs;
    slot["failed_runs"] = cell.failed_runs;
  }
  return doc;
}

}  // namespace ggn
