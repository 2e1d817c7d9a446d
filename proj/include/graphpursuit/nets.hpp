#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "graphpursuit/metric_graph.hpp"

namespace gp {

/// Finite covering set of a graph with fast nearest-member queries.
/// Points are stored canonicalized and must be pairwise distinct. The
/// stored radius is the exact covering radius of the whole space, not
/// just of a sample; it is computed per edge from the piecewise-linear
/// distance-to-net function.
class Net {
 public:
  Net(std::shared_ptr<const MetricGraph> graph, std::vector<GraphPoint> points);

  const MetricGraph& graph() const { return *graph_; }
  const std::shared_ptr<const MetricGraph>& graph_ptr() const { return graph_; }
  std::span<const GraphPoint> points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }
  const GraphPoint& point(int i) const;
  double radius() const { return radius_; }

  /// Index of a closest net point; ties resolve to the lowest index.
  int nearest_index(const GraphPoint& p) const;
  GraphPoint nearest_point(const GraphPoint& p) const {
    return points_[nearest_index(p)];
  }
  double distance_to(const GraphPoint& p) const;

 private:
  std::shared_ptr<const MetricGraph> graph_;
  std::vector<GraphPoint> points_;
  double radius_ = 0.0;
  // per vertex: distance to the net and the lowest index attaining it
  std::vector<double> vertex_dist_;
  std::vector<int> vertex_arg_;
  // per edge: (offset, index) of net points on that edge, offset-sorted
  std::vector<std::vector<std::pair<double, int>>> on_edge_;

  std::pair<double, int> nearest_impl(const GraphPoint& p) const;
};

/// Farthest-point sampling until the exact covering radius drops to eps,
/// seeded at vertex 0 and drawing candidates from a dense sample (spacing
/// at most min(eps, shortest edge)/4). Ties pick the earliest candidate.
/// min_size forces extra rounds, which can only shrink the radius.
/// sample_spacing, when positive, tightens the candidate grid further;
/// builds that must align across graphs should share one value.
Net build_eps_net(std::shared_ptr<const MetricGraph> graph, double eps,
                  int min_size = 1, double sample_spacing = 0.0);

inline GraphPoint nearest_net_point(const Net& net, const GraphPoint& p) {
  return net.nearest_point(p);
}

}  // namespace gp
