#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "graphpursuit/metric_graph.hpp"

namespace gp {

/// Positions sampled at times 0, beta, 2*beta, ...; consecutive samples
/// may be at most beta apart (plus kMetricTol), the discrete form of a
/// unit-speed curve.
class Trajectory {
 public:
  Trajectory(std::shared_ptr<const MetricGraph> graph, double beta,
             std::vector<GraphPoint> positions);

  const MetricGraph& graph() const { return *graph_; }
  const std::shared_ptr<const MetricGraph>& graph_ptr() const { return graph_; }
  double beta() const { return beta_; }
  int size() const { return static_cast<int>(positions_.size()); }
  const GraphPoint& position(int i) const;
  const GraphPoint& back() const { return positions_.back(); }
  double time(int i) const { return i * beta_; }
  std::span<const GraphPoint> positions() const { return positions_; }

  /// Appends one sample, enforcing the step bound.
  void append(const GraphPoint& p);

  /// Columns: step,time,edge,offset.
  std::string to_csv() const;
  static Trajectory from_csv(std::shared_ptr<const MetricGraph> graph,
                             double beta, const std::string& text);

 private:
  std::shared_ptr<const MetricGraph> graph_;
  double beta_ = 0.0;
  std::vector<GraphPoint> positions_;
};

/// One pursuit move: onto the target if it is within beta, otherwise
/// exactly beta along the geodesic toward it.
GraphPoint beta_pursuit_step(const MetricGraph& g, const GraphPoint& L,
                             const GraphPoint& target, double beta);

/// Iterates beta_pursuit_step along a target tuple; the result has
/// positions[0] = L0 and one more entry per target.
Trajectory beta_pursuit_curve(std::shared_ptr<const MetricGraph> graph,
                              const GraphPoint& L0,
                              std::span<const GraphPoint> targets, double beta);

}  // namespace gp
