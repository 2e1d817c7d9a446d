#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "graphpursuit/metric_graph.hpp"

namespace gp {

/// A player policy. Instances may carry mutable per-game state, so use a
/// fresh instance for every game. The contract is stepwise: the move
/// returned for step n+1 may depend only on the opponent prefix through
/// step n (and on the strategy's own history).
class Strategy {
 public:
  virtual ~Strategy() = default;

  Strategy(std::shared_ptr<const MetricGraph> graph, double beta);

  const MetricGraph& graph() const { return *graph_; }
  const std::shared_ptr<const MetricGraph>& graph_ptr() const { return graph_; }
  double beta() const { return beta_; }

  /// opponent_prefix holds the opponent's positions at steps 0..n; the
  /// return value is this player's position at step n+1. It must be
  /// within beta of `own`.
  virtual GraphPoint next(const GraphPoint& own,
                          std::span<const GraphPoint> opponent_prefix) = 0;

 protected:
  std::shared_ptr<const MetricGraph> graph_;
  double beta_ = 0.0;
};

/// Chases the opponent's latest position with beta_pursuit_step.
std::unique_ptr<Strategy> greedy_pursuer(
    std::shared_ptr<const MetricGraph> graph, double beta);

enum class EvaderKind { flee, scripted, random_walk, maximin };

/// Accepts "flee", "scripted", "random-walk", "maximin".
EvaderKind parse_evader_kind(const std::string& name);

struct EvaderParams {
  /// scripted: positions replayed one per step; the last one is held
  /// once the script runs out.
  std::vector<GraphPoint> script;
  /// random-walk.
  unsigned long long seed = 0;
  /// maximin: lookahead depth, capped at 12.
  int horizon = 8;
};

std::unique_ptr<Strategy> make_evader(std::shared_ptr<const MetricGraph> graph,
                                      double beta, EvaderKind kind,
                                      const EvaderParams& params = {});

/// The points reachable from `from` by moving exactly `budget` forward
/// along edges, branching at vertices but never reversing inside an edge.
/// A dead end short of the budget contributes the dead end itself.
/// Deterministic order; used by the flee and random-walk evaders.
std::vector<GraphPoint> forward_moves(const MetricGraph& g,
                                      const GraphPoint& from, double budget);

}  // namespace gp
