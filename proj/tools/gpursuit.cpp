// Command-line front end. Everything substantive goes through the C API
// of the shared library; this file only parses flags, shuffles JSON, and
// formats output.
//
// Exit codes: 0 = success, 1 = an asserted bound was violated,
// 2 = usage or runtime error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphpursuit.h"

namespace {

using nlohmann::json;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(gp_status s) {
  if (s != GP_OK) throw CliError(gp_last_error());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  gp_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot write " + path);
  out << text;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    write_file(out_path, text);
    std::cout << "wrote " << out_path << "\n";
  }
}

struct Graph {
  gp_graph* g = nullptr;
  ~Graph() { gp_graph_free(g); }
};

void load_graph(const std::string& expr_or_file, Graph& out) {
  // a path to a JSON file also works where an expression is expected
  if (expr_or_file.find('(') == std::string::npos &&
      std::filesystem::exists(expr_or_file)) {
    check(gp_graph_from_json(read_file(expr_or_file).c_str(), &out.g));
    return;
  }
  check(gp_graph_generate(expr_or_file.c_str(), &out.g));
}

/// Loads the config file and applies the command-line overrides; the
/// kind is pinned so a config cannot be run under the wrong subcommand.
json load_config(const std::string& path, const std::string& kind,
                 const CLI::Option* seed_opt, unsigned long long seed,
                 const CLI::Option* beta_opt, double beta_override,
                 const std::string& out_dir) {
  json cfg;
  if (!path.empty()) {
    try {
      cfg = json::parse(read_file(path));
    } catch (const json::exception& e) {
      throw CliError(path + " is not valid JSON: " + e.what());
    }
    if (!cfg.is_object()) throw CliError(path + " must hold a JSON object");
  }
  cfg["kind"] = kind;
  if (seed_opt->count() > 0) cfg["seed"] = seed;
  if (beta_opt != nullptr && beta_opt->count() > 0) {
    cfg["beta_override"] = beta_override;
  }
  if (!out_dir.empty()) cfg["out_dir"] = out_dir;
  return cfg;
}

int report_outcome(gp_report* rep, const std::string& csv_note) {
  int failed = 0;
  check(gp_report_failed(rep, &failed));
  char* js = nullptr;
  check(gp_report_to_json(rep, &js));
  std::cout << take(js) << "\n";
  if (!csv_note.empty()) std::cout << csv_note << "\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Pursuit games on metric graphs: generators, nets, space-distance "
      "bounds, game simulation, and strategy-transfer experiments. Set "
      "GRAPHPURSUIT_THREADS to control parallelism."};
  app.require_subcommand(1);

  std::string expr, expr_b, config_path, out_path, out_dir, evader = "flee";
  double eps = 0.0, radius = 0.0, beta = 0.0, horizon = 2.0;
  double beta_override = 0.0;
  unsigned long long seed = 0;

  auto* gen = app.add_subcommand("generate", "Build a graph and emit JSON");
  gen->add_option("--expr", expr, "generator expression, e.g. circle(1)")
      ->required();
  gen->add_option("--out", out_path, "write here instead of stdout");

  auto* net = app.add_subcommand("net", "Covering net of a graph");
  net->add_option("--graph", expr, "generator expression or graph JSON file")
      ->required();
  net->add_option("--eps", eps, "target covering radius")->required();
  net->add_option("--out", out_path, "write here instead of stdout");

  auto* chain = app.add_subcommand(
      "chain", "Certify two graphs are close and emit the projection maps");
  chain->add_option("--a", expr, "first graph")->required();
  chain->add_option("--b", expr_b, "second graph")->required();
  chain->add_option("--eps", eps, "distance budget")->required();
  chain->add_option("--out", out_path, "write here instead of stdout");

  auto* ghdist = app.add_subcommand(
      "ghdist", "Bounds on the Gromov-Hausdorff distance of two graphs");
  ghdist->add_option("--a", expr, "first graph")->required();
  ghdist->add_option("--b", expr_b, "second graph")->required();
  ghdist->add_option("--radius", radius, "net radius for the upper bound")
      ->required();

  auto* game = app.add_subcommand("game", "One pursuit game, CSV trajectory");
  game->add_option("--config", config_path, "single-game config JSON");
  game->add_option("--graph", expr, "generator expression");
  game->add_option("--evader", evader,
                   "flee | stationary | random-walk | maximin");
  game->add_option("--beta", beta, "step size (0 picks a default)");
  game->add_option("--T", horizon, "time horizon");
  auto* game_seed = game->add_option("--seed", seed, "RNG seed");
  game->add_option("--out-dir", out_dir, "directory for game.csv");

  auto* transfer = app.add_subcommand(
      "transfer", "Strategy-transfer experiment from a config file");
  transfer->add_option("--config", config_path, "transfer-bound config JSON")
      ->required();
  auto* transfer_seed = transfer->add_option("--seed", seed, "RNG seed");
  auto* transfer_beta = transfer->add_option(
      "--beta-override", beta_override,
      "use this step size instead of sqrt(eps); taints the report");
  transfer->add_option("--out-dir", out_dir, "directory for report and CSV");

  auto* refine = app.add_subcommand(
      "refine", "Graph-refinement experiment from a config file");
  refine->add_option("--config", config_path, "graph-refinement config JSON");
  refine->add_option("--levels", expr,
                     "semicolon-separated generator expressions (with --ref)");
  refine->add_option("--ref", expr_b, "reference description");
  auto* refine_seed = refine->add_option("--seed", seed, "RNG seed");
  refine->add_option("--out-dir", out_dir, "directory for report and CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      Graph g;
      check(gp_graph_generate(expr.c_str(), &g.g));
      char* js = nullptr;
      check(gp_graph_to_json(g.g, &js));
      emit(take(js), out_path);
      return 0;
    }

    if (net->parsed()) {
      Graph g;
      load_graph(expr, g);
      char* js = nullptr;
      check(gp_net_json(g.g, eps, &js));
      emit(take(js), out_path);
      return 0;
    }

    if (chain->parsed()) {
      Graph a, b;
      load_graph(expr, a);
      load_graph(expr_b, b);
      char* js = nullptr;
      check(gp_chaining_build_json(a.g, b.g, eps, &js));
      emit(take(js), out_path);
      return 0;
    }

    if (ghdist->parsed()) {
      Graph a, b;
      load_graph(expr, a);
      load_graph(expr_b, b);
      double up = 0.0, lo = 0.0;
      check(gp_gh_upper_bound(a.g, b.g, radius, &up));
      check(gp_gh_diameter_lower_bound(a.g, b.g, &lo));
      std::printf("lower %.17g\nupper %.17g\n", lo, up);
      return 0;
    }

    if (game->parsed()) {
      json cfg = load_config(config_path, "single-game", game_seed, seed,
                             nullptr, 0.0, "");
      if (!expr.empty()) cfg["graph"] = expr;
      if (!cfg.contains("evaders")) cfg["evaders"] = json::array({evader});
      if (beta > 0.0) cfg["beta"] = beta;
      if (!cfg.contains("T")) cfg["T"] = horizon;
      cfg.erase("out_dir");  // game CSV is written here, not by the library

      gp_game* rec = nullptr;
      check(gp_game_run(cfg.dump().c_str(), &rec));
      double min_d = 0.0;
      int steps = 0, argmin = 0;
      check(gp_game_min_distance(rec, &min_d));
      check(gp_game_steps(rec, &steps));
      check(gp_game_argmin_step(rec, &argmin));
      char* csv = nullptr;
      check(gp_game_to_csv(rec, &csv));
      const std::string text = take(csv);
      gp_game_free(rec);

      std::printf("steps %d\nmin_distance %.17g\nargmin_step %d\n", steps,
                  min_d, argmin);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file((std::filesystem::path(out_dir) / "game.csv").string(),
                   text);
        std::cout << "wrote " << out_dir << "/game.csv\n";
      }
      return 0;
    }

    if (transfer->parsed()) {
      const json cfg =
          load_config(config_path, "transfer-bound", transfer_seed, seed,
                      transfer_beta, beta_override, out_dir);
      gp_report* rep = nullptr;
      check(gp_run_transfer_experiment(cfg.dump().c_str(), &rep));
      const int code = report_outcome(
          rep, out_dir.empty() ? "" : "wrote " + out_dir + "/transfer_*.{json,csv}");
      gp_report_free(rep);
      return code;
    }

    if (refine->parsed()) {
      json cfg = load_config(config_path, "graph-refinement", refine_seed,
                             seed, nullptr, 0.0, out_dir);
      if (!expr.empty()) {
        json levels = json::array();
        std::stringstream ss(expr);
        std::string item;
        while (std::getline(ss, item, ';')) levels.push_back(item);
        cfg["levels"] = levels;
      }
      if (!expr_b.empty()) cfg["reference"] = expr_b;
      gp_report* rep = nullptr;
      check(gp_run_refinement_experiment(cfg.dump().c_str(), &rep));
      const int code = report_outcome(
          rep, out_dir.empty() ? "" : "wrote " + out_dir + "/refine_*.{json,csv}");
      gp_report_free(rep);
      return code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
