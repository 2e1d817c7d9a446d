#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpursuit/pursuit.hpp"
#include "graphpursuit/strategy.hpp"

namespace gp {

/// A player broke the rules of an otherwise well-formed game (for example
/// by emitting a step longer than beta). Distinct from DomainError so
/// callers can tell bad inputs from bad behavior.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GameRecord {
  std::shared_ptr<const MetricGraph> graph;
  double beta = 0.0;
  int steps = 0;  // N; trajectories hold N+1 samples
  Trajectory pursuer;
  Trajectory evader;
  std::vector<double> distances;
  double min_distance = 0.0;
  int argmin_step = 0;

  /// Recomputes the derived fields and cross-checks them; throws
  /// DomainError on any mismatch.
  void validate() const;

  /// Columns: step,time,pursuer_edge,pursuer_offset,evader_edge,
  /// evader_offset,distance.
  std::string to_csv() const;
};

/// Simulates ceil(T/beta) simultaneous steps: both strategies observe
/// positions through step i and commit step i+1 before either move lands.
GameRecord run_game(std::shared_ptr<const MetricGraph> graph,
                    Strategy& pursuer, Strategy& evader, const GraphPoint& L0,
                    const GraphPoint& M0, double beta, double T);

/// Builds a fresh per-game strategy instance; receives the start pair so
/// scripted or start-relative players can bind to it.
using StrategyFactory = std::function<std::unique_ptr<Strategy>(
    const GraphPoint& L0, const GraphPoint& M0)>;

/// Max over every (evader, L0, M0) combination of that game's min
/// distance: the smallest capture radius the pursuer demonstrably achieves
/// against the suite from the tested starts.
double capture_radius_estimate(std::shared_ptr<const MetricGraph> graph,
                               const StrategyFactory& pursuer,
                               std::span<const StrategyFactory> evader_suite,
                               std::span<const GraphPoint> L0_set,
                               std::span<const GraphPoint> M0_set, double beta,
                               double T);

/// N = ceil(T/beta), guarded against a quotient that is a hair above an
/// integer in floating point.
int horizon_steps(double T, double beta);

}  // namespace gp
