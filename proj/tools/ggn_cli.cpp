// Command-line front end: dataset ingestion, team-game simulation, deviation
// network construction, kernel inference, evaluation and the worked demos.

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ggn/all.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flat JSON config file: keys are long option names, values are scalars or
// arrays. Keys already given on the command line are skipped, so explicit
// flags always override config values; keys the active subcommand does not
// know are ignored (configs can be shared across subcommands).
void merge_config_args(CLI::App& app, std::vector<std::string>& args) {
  std::string config_path, subcommand;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (subcommand.empty() && !a.empty() && a[0] != '-') {
      subcommand = a;
      continue;
    }
    if (a == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (a.rfind("--config=", 0) == 0)
      config_path = a.substr(9);
  }
  if (config_path.empty() || subcommand.empty()) return;
  CLI::App* sub = app.get_subcommand_no_throw(subcommand);
  if (sub == nullptr) return;

  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config file: " + config_path);
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/true);
  if (!doc.is_object()) throw std::runtime_error("config must be a JSON object");

  auto render = [](const json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  for (const auto& [key, value] : doc.items()) {
    const std::string flag = "--" + key;
    bool given = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
    if (given || sub->get_option_no_throw(flag) == nullptr) continue;
    args.push_back(flag);
    if (value.is_array())
      for (const auto& v : value) args.push_back(render(v));
    else
      args.push_back(render(value));
  }
}

struct CommonOpts {
  std::string dataset;
  std::vector<double> c{0.2};
  std::vector<int> k{2};
  int runs = 5;
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 1;
  bool symmetrize = true;
  std::string tie_rule = "current-first";
  std::string accuracy_scope = "predicted";
  int max_sweeps = 200;
  double tolerance = 1e-9;
  int sample = 0;
  std::string sample_method = "top-degree";
  std::uint64_t sample_seed = 0;
};

void add_config_support(CLI::App* cmd, std::string& config_path) {
  cmd->add_option("--config", config_path,
                  "JSON config file; explicit flags override its values");
}

void add_dataset_flag(CLI::App* cmd, CommonOpts& o, bool required = true) {
  auto* opt = cmd->add_option(
      "--dataset", o.dataset,
      "edge-list file or builtin: karate, karate-planted[:node], pd");
  if (required) opt->required();
  cmd->add_option("--sample", o.sample,
                  "sample the dataset down to this many nodes (0 = off)");
  cmd->add_option("--sample-method", o.sample_method, "top-degree or bfs-ball")
      ->check(CLI::IsMember({"top-degree", "bfs-ball"}));
  cmd->add_option("--sample-seed", o.sample_seed, "seed for bfs-ball sampling");
}

void add_sim_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--c", o.c, "team-game balance parameter(s)")->delimiter(',');
  cmd->add_option("--seed", o.seed, "base random seed");
  cmd->add_option("--max-sweeps", o.max_sweeps, "sweep budget before reporting non-convergence");
  cmd->add_option("--improvement-tolerance", o.tolerance, "minimum accepted utility improvement");
  cmd->add_option("--tie-rule", o.tie_rule, "best-move tie rule")
      ->check(CLI::IsMember({"current-first", "lowest-id"}));
}

void add_out_flag(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "output directory (default: timestamped ggn-out-*)");
}

ggn::TieRule tie_rule_of(const CommonOpts& o) {
  return o.tie_rule == "lowest-id" ? ggn::TieRule::lowest_id
                                   : ggn::TieRule::current_first;
}

ggn::SignedGraph builtin_pd_graph() {
  return ggn::SignedGraph::make(2, false, {{0, 1, 1.0}}, {"1", "2"});
}

ggn::SignedGraph resolve_dataset(const CommonOpts& o) {
  ggn::SignedGraph g;
  if (o.dataset == "karate") {
    g = ggn::karate_graph();
  } else if (o.dataset == "pd") {
    g = builtin_pd_graph();
  } else if (o.dataset.rfind("karate-planted", 0) == 0) {
    ggn::NodeId node = 23;
    if (auto colon = o.dataset.find(':'); colon != std::string::npos)
      node = std::stoi(o.dataset.substr(colon + 1));
    g = ggn::karate_with_planted_signs(node);
  } else {
    std::ifstream in(o.dataset);
    if (!in) throw std::runtime_error("cannot open dataset file: " + o.dataset);
    g = make_undirected(ggn::load_edge_list(in));
  }
  if (o.sample > 0) {
    const auto method = o.sample_method == "bfs-ball" ? ggn::SampleMethod::bfs_ball
                                                      : ggn::SampleMethod::top_degree;
    g = sample_subgraph(g, o.sample, method, o.sample_seed);
  }
  return g;
}

fs::path resolve_out_dir(const CommonOpts& o) {
  fs::path dir;
  if (!o.out.empty()) {
    dir = o.out;
  } else {
    char stamp[32];
    std::time_t now = std::time(nullptr);
    std::tm tm_buf{};
    localtime_r(&now, &tm_buf);
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm_buf);
    dir = std::string("ggn-out-") + stamp;
    for (int i = 1; fs::exists(dir); ++i)
      dir = std::string("ggn-out-") + stamp + "-" + std::to_string(i);
  }
  fs::create_directories(dir);
  return dir;
}

json resolved_config_json(const std::string& command, const CommonOpts& o) {
  json doc;
  doc["command"] = command;
  doc["dataset"] = o.dataset;
  doc["c"] = o.c;
  doc["k"] = o.k;
  doc["runs"] = o.runs;
  doc["seed"] = o.seed;
  doc["jobs"] = o.jobs;
  doc["symmetrize"] = o.symmetrize;
  doc["tie-rule"] = o.tie_rule;
  doc["accuracy-scope"] = o.accuracy_scope;
  doc["max-sweeps"] = o.max_sweeps;
  doc["improvement-tolerance"] = o.tolerance;
  doc["sample"] = o.sample;
  doc["sample-method"] = o.sample_method;
  doc["sample-seed"] = o.sample_seed;
  return doc;
}

// Every run announces the fully resolved configuration, seed included, and
// leaves a copy next to its outputs.
void announce_config(const json& doc, const std::optional<fs::path>& out_dir) {
  std::cout << "resolved config: " << doc.dump() << "\n";
  if (out_dir) {
    std::ofstream f(*out_dir / "config.json");
    f << doc.dump(2) << "\n";
  }
}

std::string c_tag(double c) { return ggn::detail::format_double(c); }

void write_file(const fs::path& p, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  fn(out);
}

int cmd_simulate(const CommonOpts& o) {
  const auto g = resolve_dataset(o);
  const auto dir = resolve_out_dir(o);
  announce_config(resolved_config_json("simulate", o), dir);
  for (double c : o.c) {
    ggn::TeamGameConfig cfg{c, o.seed, o.max_sweeps, o.tolerance, tie_rule_of(o)};
    const auto sim = simulate(g, cfg);
    const fs::path file = dir / ("partition_c" + c_tag(c) + ".csv");
    write_file(file, [&](std::ostream& out) { save_partition_csv(sim.partition, out); });
    std::cout << "c=" << c_tag(c) << ": "
              << (sim.converged ? "converged" : "DID NOT CONVERGE") << " after "
              << sim.sweeps << " sweeps, " << sim.partition.team_count()
              << " teams -> " << file.string() << "\n";
    if (!sim.converged)
      std::cerr << "warning: c=" << c_tag(c) << " hit the sweep budget ("
                << o.max_sweeps << ") without converging\n";
  }
  return 0;
}

int cmd_ggn(const CommonOpts& o, const std::string& partition_file) {
  const auto g = resolve_dataset(o);
  const auto skeleton = to_skeleton(g);
  const auto dir = resolve_out_dir(o);
  json cfg = resolved_config_json("ggn", o);
  if (!partition_file.empty()) cfg["partition"] = partition_file;
  announce_config(cfg, dir);

  std::optional<ggn::TeamPartition> fixed;
  if (!partition_file.empty()) {
    std::ifstream in(partition_file);
    if (!in) throw std::runtime_error("cannot open partition file: " + partition_file);
    fixed = ggn::load_partition_csv(in);
  }
  for (double c : o.c) {
    ggn::TeamPartition observed;
    if (fixed) {
      observed = *fixed;
    } else {
      ggn::TeamGameConfig sim_cfg{c, o.seed, o.max_sweeps, o.tolerance, tie_rule_of(o)};
      const auto sim = simulate(g, sim_cfg);
      if (!sim.converged)
        std::cerr << "warning: c=" << c_tag(c) << " simulation did not converge; "
                  << "building the network from the last partition\n";
      observed = sim.partition;
    }
    const auto network = filter_edges(
        build_team_ggn(observed, skeleton, c, o.tolerance, tie_rule_of(o)), skeleton);
    const fs::path file = dir / ("ggn_c" + c_tag(c) + ".edges");
    write_file(file, [&](std::ostream& out) { save_ggn_edge_list(network, out); });
    std::cout << "c=" << c_tag(c) << ": " << network.edges.size()
              << " deviation edges -> " << file.string() << "\n";
  }
  return 0;
}

int cmd_infer(const CommonOpts& o, const std::string& ggn_file) {
  const auto g = resolve_dataset(o);
  const auto skeleton = to_skeleton(g);
  std::ifstream in(ggn_file);
  if (!in) throw std::runtime_error("cannot open GGN edge list: " + ggn_file);
  const auto network = ggn::load_ggn_edge_list(in, skeleton.node_count());
  const auto dir = resolve_out_dir(o);
  json cfg = resolved_config_json("infer", o);
  cfg["ggn"] = ggn_file;
  announce_config(cfg, dir);

  const auto adjacency = ggn::ScoreMatrix::from_ggn(filter_edges(network, skeleton));
  for (int k : o.k) {
    const auto kernel = exponential_kernel(adjacency, k);
    const auto pred = predict_signs(kernel, skeleton, o.symmetrize);
    const fs::path file = dir / ("predictions_k" + std::to_string(k) + ".csv");
    write_file(file, [&](std::ostream& out) { save_predictions_csv(pred, out); });
    std::cout << "k=" << k << ": " << pred.predictions.size() << " of "
              << skeleton.edges().size() << " edges predicted -> " << file.string()
              << "\n";
  }
  return 0;
}

int cmd_evaluate(const CommonOpts& o) {
  ggn::ExperimentConfig cfg;
  cfg.dataset = o.dataset;
  cfg.ground_truth = resolve_dataset(o);
  cfg.c_values = o.c;
  cfg.k_values = o.k;
  cfg.runs = o.runs;
  cfg.base_seed = o.seed;
  cfg.symmetrize = o.symmetrize;
  cfg.accuracy_scope = o.accuracy_scope == "all" ? ggn::AccuracyScope::all_edges
                                                 : ggn::AccuracyScope::predicted_only;
  cfg.max_sweeps = o.max_sweeps;
  cfg.improvement_tolerance = o.tolerance;
  cfg.tie_rule = tie_rule_of(o);
  cfg.jobs = o.jobs;

  const auto dir = resolve_out_dir(o);
  announce_config(resolved_config_json("evaluate", o), dir);

  const auto output = run_experiment(cfg);
  write_file(dir / "results.csv",
             [&](std::ostream& out) { save_results_csv(output.results, out); });
  write_file(dir / "summary.json", [&](std::ostream& out) {
    out << summary_to_json(output.summary).dump(2) << "\n";
  });

  std::printf("%-18s %6s %3s %10s %10s %10s %10s %5s\n", "dataset", "c", "k",
              "acc_mean", "acc_std", "pp_mean", "pp_std", "excl");
  for (const auto& cell : output.summary.cells) {
    auto num = [](const std::optional<double>& v) {
      return v ? ggn::detail::format_double(*v) : std::string("nan");
    };
    std::printf("%-18s %6s %3d %10s %10s %10s %10s %5d\n", cell.dataset.c_str(),
                c_tag(cell.c).c_str(), cell.k, num(cell.accuracy_mean).c_str(),
                num(cell.accuracy_std).c_str(), num(cell.predictive_mean).c_str(),
                num(cell.predictive_std).c_str(), cell.excluded_accuracy);
  }
  std::cout << "results -> " << (dir / "results.csv").string() << "\n"
            << "summary -> " << (dir / "summary.json").string() << "\n";
  int failed = 0;
  for (const auto& cell : output.summary.cells) failed += cell.failed_runs;
  if (failed > 0)
    std::cerr << "warning: " << failed
              << " run(s) did not converge; their metrics are recorded as nan\n";
  return 0;
}

std::string profile_name(const ggn::NormalFormGame& game,
                         const ggn::StrategyProfile& s) {
  std::string out = "(";
  for (int p = 0; p < game.player_count(); ++p) {
    if (p) out += ",";
    out += game.strategy_name(p, s.choices[p]);
  }
  return out + ")";
}

int cmd_pd_demo(const std::string& outcome, double mutual_quiet,
                const std::string& game_file, const std::string& mode) {
  ggn::NormalFormGame game;
  if (!game_file.empty()) {
    std::ifstream in(game_file);
    if (!in) throw std::runtime_error("cannot open game file: " + game_file);
    game = ggn::game_from_json(json::parse(in));
    if (game.player_count() != 2)
      throw std::runtime_error("pd-demo expects a 2-player game");
  } else {
    game = ggn::prisoners_dilemma(mutual_quiet);
  }

  json cfg;
  cfg["command"] = "pd-demo";
  cfg["outcome"] = outcome.empty() ? json(nullptr) : json(outcome);
  cfg["mutual-quiet"] = mutual_quiet;
  cfg["mode"] = mode;
  announce_config(cfg, std::nullopt);

  std::cout << "payoff table (row: player 1, column: player 2):\n";
  std::printf("%8s", "");
  for (int s2 = 0; s2 < game.strategy_count(1); ++s2)
    std::printf(" %14s", game.strategy_name(1, s2).c_str());
  std::printf("\n");
  for (int s1 = 0; s1 < game.strategy_count(0); ++s1) {
    std::printf("%8s", game.strategy_name(0, s1).c_str());
    for (int s2 = 0; s2 < game.strategy_count(1); ++s2) {
      ggn::StrategyProfile s{{s1, s2}};
      const std::string cell = "(" + ggn::detail::format_double(game.utility(s, 0)) +
                               "," + ggn::detail::format_double(game.utility(s, 1)) +
                               ")";
      std::printf(" %14s", cell.c_str());
    }
    std::printf("\n");
  }

  const auto equilibria = find_pure_nash(game);
  std::cout << "pure Nash equilibria:";
  if (equilibria.empty()) std::cout << " none";
  for (const auto& eq : equilibria) std::cout << ' ' << profile_name(game, eq);
  std::cout << "\n";

  ggn::DeviationModel model;
  model.mode = mode == "nash-profile" ? ggn::DeviationMode::nash_profile
                                      : ggn::DeviationMode::best_response;

  auto parse_outcome = [&](const std::string& text) {
    std::istringstream ss(text);
    ggn::StrategyProfile s;
    std::string token;
    while (std::getline(ss, token, ',')) {
      const int player = static_cast<int>(s.choices.size());
      if (player >= game.player_count())
        throw std::runtime_error("outcome lists more strategies than players");
      const int idx = game.find_strategy(player, token);
      if (idx < 0)
        throw std::runtime_error("unknown strategy '" + token + "' for player " +
                                 std::to_string(player + 1));
      s.choices.push_back(idx);
    }
    if (!game.valid_profile(s))
      throw std::runtime_error("outcome must list one strategy per player");
    return s;
  };

  auto show = [&](const ggn::StrategyProfile& real) {
    const auto networks = build_general_ggn(game, real, model);
    for (const auto& [network, equilibrium] : networks) {
      std::cout << "GGN for outcome " << profile_name(game, real) << " ("
                << (model.mode == ggn::DeviationMode::best_response
                        ? "best-response deviations"
                        : "equilibrium " + profile_name(game, *equilibrium))
                << "):\n";
      for (const auto& e : network.edges)
        std::cout << "  edge " << e.src + 1 << "->" << e.dst + 1 << " weight "
                  << ggn::detail::format_double(e.weight) << "\n";
    }
  };

  if (!outcome.empty()) {
    show(parse_outcome(outcome));
  } else {
    // the two worked outcomes: one prisoner silent, and both silent
    show(parse_outcome("Q,S"));
    show(parse_outcome("Q,Q"));
  }
  return 0;
}

int cmd_karate_demo(int negative_node, double c, int k, std::uint64_t seed,
                    const CommonOpts& o) {
  const auto truth = ggn::karate_with_planted_signs(negative_node);
  const auto skeleton = to_skeleton(truth);
  json cfg;
  cfg["command"] = "karate-demo";
  cfg["negative-node"] = negative_node;
  cfg["c"] = c;
  cfg["k"] = k;
  cfg["seed"] = seed;
  announce_config(cfg, std::nullopt);

  const auto s = stats(truth);
  std::cout << "dataset: karate-planted:" << negative_node << " (" << s.nodes
            << " nodes, " << s.edges << " edges: " << s.positive_edges << " +, "
            << s.negative_edges << " -)\n";

  ggn::TeamGameConfig sim_cfg{c, seed, o.max_sweeps, o.tolerance, tie_rule_of(o)};
  const auto sim = simulate(truth, sim_cfg);
  std::cout << "simulation: " << (sim.converged ? "converged" : "DID NOT CONVERGE")
            << " after " << sim.sweeps << " sweeps, "
            << sim.partition.team_count() << " teams; node " << negative_node
            << " team size " << sim.partition.node_team_size(negative_node) << "\n";

  const auto network = filter_edges(
      build_team_ggn(sim.partition, skeleton, c, o.tolerance, tie_rule_of(o)),
      skeleton);
  std::cout << "GGN: " << network.edges.size() << " edges after filtering\n";

  const auto adjacency = ggn::ScoreMatrix::from_ggn(network);
  const auto kernel = exponential_kernel(adjacency, k);

  auto sign_char = [](double x) { return x > 0 ? '+' : '-'; };
  std::cout << "first-order relations to node " << negative_node << ":";
  std::vector<char> direct(skeleton.node_count(), 0);
  for (int u = 0; u < skeleton.node_count(); ++u) {
    if (u == negative_node) continue;
    const double d = adjacency.at(u, negative_node) + adjacency.at(negative_node, u);
    if (d != 0.0) {
      direct[u] = 1;
      std::cout << ' ' << u << ':' << sign_char(d);
    }
  }
  std::cout << "\nsecond-order relations to node " << negative_node << ":";
  for (int u = 0; u < skeleton.node_count(); ++u) {
    if (u == negative_node || direct[u]) continue;
    const double score =
        kernel.at(u, negative_node) + kernel.at(negative_node, u);
    if (score != 0.0) std::cout << ' ' << u << ':' << sign_char(score);
  }
  std::cout << "\n";

  const auto pred = predict_signs(kernel, skeleton, o.symmetrize);
  const auto acc = average_accuracy(pred, truth);
  std::cout << "predictions on skeleton edges: " << pred.predictions.size() << " of "
            << skeleton.edges().size()
            << "; average accuracy: " << (acc ? ggn::detail::format_double(*acc) : "undefined")
            << "\n";
  return 0;
}

int cmd_stats(const CommonOpts& o) {
  const auto g = resolve_dataset(o);
  json cfg;
  cfg["command"] = "stats";
  cfg["dataset"] = o.dataset;
  cfg["sample"] = o.sample;
  announce_config(cfg, std::nullopt);
  const auto s = stats(g);
  std::string name = o.dataset;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos)
    name = name.substr(slash + 1);
  std::cout << stats_table_row(name, s) << "\n";
  if (s.zero_weight_edges > 0)
    std::cout << "zero-weight edges: " << s.zero_weight_edges << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"game generative network toolkit"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);

  CommonOpts o;
  std::string config_path;

  auto* simulate_cmd =
      app.add_subcommand("simulate", "run the team game and export the partition");
  add_dataset_flag(simulate_cmd, o);
  add_sim_flags(simulate_cmd, o);
  add_out_flag(simulate_cmd, o);
  add_config_support(simulate_cmd, config_path);

  auto* ggn_cmd = app.add_subcommand(
      "ggn", "build a filtered team-game deviation network edge list");
  std::string partition_file;
  add_dataset_flag(ggn_cmd, o);
  add_sim_flags(ggn_cmd, o);
  add_out_flag(ggn_cmd, o);
  ggn_cmd->add_option("--partition", partition_file,
                      "partition CSV to use instead of simulating");
  add_config_support(ggn_cmd, config_path);

  auto* infer_cmd = app.add_subcommand(
      "infer", "kernel sign inference on an exported deviation network");
  std::string ggn_file;
  add_dataset_flag(infer_cmd, o);
  infer_cmd->add_option("--ggn", ggn_file, "GGN edge-list file")->required();
  infer_cmd->add_option("--k", o.k, "kernel truncation order(s)")->delimiter(',');
  infer_cmd->add_option("--symmetrize", o.symmetrize,
                        "combine both directed kernel entries per edge");
  add_out_flag(infer_cmd, o);
  add_config_support(infer_cmd, config_path);

  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "full pipeline with repetitions, metrics and summaries");
  add_dataset_flag(evaluate_cmd, o);
  add_sim_flags(evaluate_cmd, o);
  evaluate_cmd->add_option("--k", o.k, "kernel truncation order(s)")->delimiter(',');
  evaluate_cmd->add_option("--runs", o.runs, "repetitions per (c, k) cell");
  evaluate_cmd->add_option("--jobs", o.jobs,
                           "parallel workers (1 = bit-reproducible single thread)");
  evaluate_cmd->add_option("--symmetrize", o.symmetrize,
                           "combine both directed kernel entries per edge");
  evaluate_cmd
      ->add_option("--accuracy-scope", o.accuracy_scope,
                   "score predicted edges only, or all edges")
      ->check(CLI::IsMember({"predicted", "all"}));
  add_out_flag(evaluate_cmd, o);
  add_config_support(evaluate_cmd, config_path);

  auto* pd_cmd = app.add_subcommand("pd-demo",
                                    "prisoners' dilemma worked example");
  std::string outcome, game_file, mode = "best-response";
  double mutual_quiet = -1.0;
  pd_cmd->add_option("--outcome", outcome,
                     "observed strategies, e.g. Q,S (default: both worked outcomes)");
  pd_cmd->add_option("--mutual-quiet", mutual_quiet,
                     "payoff when both keep quiet");
  pd_cmd->add_option("--game", game_file, "JSON game description override");
  pd_cmd->add_option("--mode", mode, "deviation model")
      ->check(CLI::IsMember({"best-response", "nash-profile"}));
  add_config_support(pd_cmd, config_path);

  auto* karate_cmd = app.add_subcommand(
      "karate-demo", "karate-club case study with one planted negative node");
  int negative_node = 23;
  double demo_c = 0.2;
  int demo_k = 2;
  karate_cmd->add_option("--negative-node", negative_node,
                         "node with negative relations to all its neighbours");
  karate_cmd->add_option("--c", demo_c, "team-game balance parameter");
  karate_cmd->add_option("--k", demo_k, "kernel truncation order");
  karate_cmd->add_option("--seed", o.seed, "simulation seed");
  karate_cmd->add_option("--tie-rule", o.tie_rule, "best-move tie rule")
      ->check(CLI::IsMember({"current-first", "lowest-id"}));
  add_config_support(karate_cmd, config_path);

  auto* stats_cmd =
      app.add_subcommand("stats", "dataset statistics table row");
  add_dataset_flag(stats_cmd, o);
  add_config_support(stats_cmd, config_path);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    merge_config_args(app, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::vector<const char*> argv2{argv[0]};
  for (const std::string& a : args) argv2.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(o);
    if (ggn_cmd->parsed()) return cmd_ggn(o, partition_file);
    if (infer_cmd->parsed()) return cmd_infer(o, ggn_file);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o);
    if (pd_cmd->parsed()) return cmd_pd_demo(outcome, mutual_quiet, game_file, mode);
    if (karate_cmd->parsed())
      return cmd_karate_demo(negative_node, demo_c, demo_k, o.seed, o);
    if (stats_cmd->parsed()) return cmd_stats(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
