#include "graphpursuit/pursuit.hpp"

#include <cstdio>
#include <sstream>
#include <utility>

namespace gp {

namespace {

void check_step(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b,
                double beta) {
  if (g.distance(a, b) > beta + kMetricTol) {
    throw DomainError("trajectory step exceeds beta");
  }
}

}  // namespace

Trajectory::Trajectory(std::shared_ptr<const MetricGraph> graph, double beta,
                       std::vector<GraphPoint> positions)
    : graph_(std::move(graph)), beta_(beta), positions_(std::move(positions)) {
  if (!graph_) throw DomainError("trajectory requires a graph");
  if (!(beta_ > 0.0)) throw DomainError("beta must be positive");
  if (positions_.empty()) throw DomainError("trajectory must hold at least one position");
  for (const GraphPoint& p : positions_) graph_->validate_point(p);
  for (std::size_t i = 0; i + 1 < positions_.size(); ++i) {
    check_step(*graph_, positions_[i], positions_[i + 1], beta_);
  }
}

const GraphPoint& Trajectory::position(int i) const {
  if (i < 0 || i >= size()) throw DomainError("trajectory index out of range");
  return positions_[static_cast<std::size_t>(i)];
}

void Trajectory::append(const GraphPoint& p) {
  graph_->validate_point(p);
  check_step(*graph_, positions_.back(), p, beta_);
  positions_.push_back(p);
}

std::string Trajectory::to_csv() const {
  std::string out = "step,time,edge,offset\n";
  char buf[128];
  for (int i = 0; i < size(); ++i) {
    const GraphPoint& p = positions_[static_cast<std::size_t>(i)];
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%d,%.17g\n", i, time(i), p.edge,
                  p.offset);
    out += buf;
  }
  return out;
}

Trajectory Trajectory::from_csv(std::shared_ptr<const MetricGraph> graph,
                                double beta, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "step,time,edge,offset") {
    throw DomainError("trajectory csv must start with header step,time,edge,offset");
  }
  std::vector<GraphPoint> positions;
  int expected_step = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    int step = 0, edge = 0;
    double t = 0.0, offset = 0.0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(row >> step >> c1 >> t >> c2 >> edge >> c3 >> offset) || c1 != ',' ||
        c2 != ',' || c3 != ',') {
      throw DomainError("malformed trajectory csv row: " + line);
    }
    if (step != expected_step) {
      throw DomainError("trajectory csv steps must count up from 0");
    }
    ++expected_step;
    positions.push_back(GraphPoint{edge, offset});
  }
  return Trajectory(std::move(graph), beta, std::move(positions));
}

GraphPoint beta_pursuit_step(const MetricGraph& g, const GraphPoint& L,
                             const GraphPoint& target, double beta) {
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  g.validate_point(L);
  g.validate_point(target);
  if (g.distance(L, target) <= beta) return target;
  return g.geodesic(L, target).point_along(beta);
}

Trajectory beta_pursuit_curve(std::shared_ptr<const MetricGraph> graph,
                              const GraphPoint& L0,
                              std::span<const GraphPoint> targets,
                              double beta) {
  if (!graph) throw DomainError("beta_pursuit_curve requires a graph");
  std::vector<GraphPoint> positions;
  positions.reserve(targets.size() + 1);
  positions.push_back(L0);
  for (const GraphPoint& m : targets) {
    positions.push_back(beta_pursuit_step(*graph, positions.back(), m, beta));
  }
  return Trajectory(std::move(graph), beta, std::move(positions));
}

}  // namespace gp
