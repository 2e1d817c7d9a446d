#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpursuit/game.hpp"
#include "graphpursuit/transfer.hpp"

namespace gp {

/// Raised when report or CSV output cannot be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
  transfer_bound,
  graph_refinement,
  gh_sweep,
  single_game,
};

/// One experiment's worth of knobs, loadable from JSON. Which fields
/// matter depends on the kind; validate() enforces the combination.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::transfer_bound;
  std::string graph;                // base-space generator expression
  std::vector<std::string> levels;  // refinement / sweep: per-level expressions
  std::string reference;            // refinement: the limit description
  double alpha = 0.1;
  double T = 2.0;
  std::vector<double> eps_list;     // transfer sweep; 0 = identity desk check
  std::vector<std::string> evaders; // flee | stationary | random-walk | maximin
  int subdivisions = 4;             // pieces per edge in the perturbed copy
  unsigned long long seed = 0;
  double beta = 0.0;           // refinement/game step; 0 picks a default
  double beta_override = 0.0;  // transfer: replaces sqrt(eps), taints reports
  bool negative_control = false;  // transfer: scrambled pairing, expect failure
  double monotone_tol = 0.0;   // refinement slack; 0 = 2x the level's min edge
  std::string out_dir;         // reports/CSV land here; empty = don't write

  static ExperimentConfig from_json(const std::string& text);
  void validate() const;
};

/// One sweep point of a transfer-bound experiment.
struct TransferSweepPoint {
  double eps = 0.0;
  double beta = 0.0;
  double inner_value = 0.0;      // inner pursuer's certified radius on B
  bool inner_certified = false;  // inner_value <= alpha
  double bound = 0.0;
  double worst_min_distance = 0.0;
  double excess = 0.0;  // worst_min_distance - alpha
  bool violated = false;
  bool has_report = false;
  TransferReport report;  // full certification when has_report
};

struct TransferExperimentReport {
  double alpha = 0.0;
  double T = 0.0;
  bool beta_overridden = false;
  bool negative_control = false;
  bool failed = false;  // any bound violation or uncertified inner strategy
  std::vector<TransferSweepPoint> points;

  std::string to_json() const;
  /// One row per sweep point: eps,beta,excess,bound,violated.
  std::string plot_csv() const;
};

/// Sweeps cfg.eps_list: per point, builds the perturbed copy of the base
/// graph, chains the two, certifies the inner greedy pursuer on the base
/// side, and audits the transferred strategy's bound on the copy.
/// Chaining construction failure aborts the whole experiment with a
/// ChainingError carrying the best distortion reached. Writes
/// transfer_report.json and transfer_plot.csv under cfg.out_dir when set.
TransferExperimentReport run_transfer_experiment(const ExperimentConfig& cfg);

struct RefinementLevel {
  std::string graph_expr;
  int index = 0;           // position in the level list
  double feature = 0.0;    // the level's min edge length
  double gh_bound = 0.0;   // certified upper bound to the reference
  double alpha_n = 0.0;    // capture radius estimate on this level
  bool failed = false;
  std::string error;
};

struct RefinementReport {
  std::string reference;
  double beta = 0.0;
  double T = 0.0;
  std::vector<RefinementLevel> levels;
  bool monotone_alpha = false;  // nonincreasing within per-level tolerance
  bool monotone_gh = false;     // gh bounds nonincreasing
  bool failed = false;          // a level failed or monotone_alpha is false

  std::string to_json() const;
  /// One row per level: level,graph,min_edge,gh_bound,alpha.
  std::string table_csv() const;
};

/// Per level: builds the graph, bounds its distance to the reference
/// description, and measures the capture radius against the evader suite
/// from antipodal-style starts (pursuer at vertex 0, evader at the
/// farthest sampled point). Construction failures mark the level and the
/// sweep continues. Writes refine_report.json and refine_table.csv under
/// cfg.out_dir when set.
RefinementReport run_refinement_experiment(const ExperimentConfig& cfg);

struct GhSweepRow {
  std::string graph_expr;
  double bound = 0.0;
  bool failed = false;
  std::string error;
};

struct GhSweepReport {
  std::string base;
  std::vector<GhSweepRow> rows;
  std::string to_json() const;
};

/// Certified GH upper bounds from cfg.graph to each entry of cfg.levels.
GhSweepReport run_gh_sweep(const ExperimentConfig& cfg);

/// One game on cfg.graph: greedy pursuer from vertex 0 against
/// cfg.evaders[0] started at the farthest sampled point.
GameRecord run_single_game(const ExperimentConfig& cfg);

/// Evader factory for a config suite entry. "stationary" holds at M0;
/// the other names go through parse_evader_kind.
StrategyFactory suite_member(std::shared_ptr<const MetricGraph> graph,
                             double beta, const std::string& name,
                             unsigned long long seed);

}  // namespace gp
