#include "graphpursuit/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NetIndex {
  std::vector<double> vdist;
  std::vector<int> varg;
  std::vector<std::vector<std::pair<double, int>>> on_edge;
};

// True distance from a vertex to a net point: any path enters the point's
// edge through one of its endpoints.
double vertex_to_point(const MetricGraph& g, int v, const GraphPoint& p) {
  const Edge& e = g.edge(p.edge);
  return std::min(p.offset + g.vertex_distance(v, e.u),
                  (e.length - p.offset) + g.vertex_distance(v, e.v));
}

NetIndex build_index(const MetricGraph& g, std::span<const GraphPoint> pts) {
  NetIndex idx;
  idx.vdist.assign(g.vertex_count(), kInf);
  idx.varg.assign(g.vertex_count(), -1);
  idx.on_edge.assign(g.edge_count(), {});
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    for (int v = 0; v < g.vertex_count(); ++v) {
      const double d = vertex_to_point(g, v, pts[i]);
      if (d < idx.vdist[v]) {
        idx.vdist[v] = d;
        idx.varg[v] = i;
      }
    }
    idx.on_edge[pts[i].edge].emplace_back(pts[i].offset, i);
  }
  for (auto& lst : idx.on_edge) std::sort(lst.begin(), lst.end());
  return idx;
}

// On one edge the distance to the net is t -> min_j |t - anchor_j|, where
// the anchors are the on-edge offsets plus the two endpoint routes folded
// to virtual positions -vdist[u] and length + vdist[v]. The maximum of
// such a function over [0, length] sits at an interval end or between two
// consecutive anchors.
double edge_max_distance(const MetricGraph& g, const NetIndex& idx, int eid) {
  const Edge& e = g.edge(eid);
  std::vector<double> anchors;
  anchors.reserve(idx.on_edge[eid].size() + 2);
  anchors.push_back(-idx.vdist[e.u]);
  for (const auto& [off, i] : idx.on_edge[eid]) anchors.push_back(off);
  anchors.push_back(e.length + idx.vdist[e.v]);
  std::sort(anchors.begin(), anchors.end());

  auto value_at = [&](double t) {
    double best = kInf;
    for (double a : anchors) best = std::min(best, std::abs(t - a));
    return best;
  };
  double worst = std::max(value_at(0.0), value_at(e.length));
  for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
    const double mid = 0.5 * (anchors[i] + anchors[i + 1]);
    if (mid > 0.0 && mid < e.length) worst = std::max(worst, value_at(mid));
  }
  return worst;
}

double covering_radius(const MetricGraph& g, const NetIndex& idx) {
  double r = 0.0;
  for (int eid = 0; eid < g.edge_count(); ++eid)
    r = std::max(r, edge_max_distance(g, idx, eid));
  return r;
}

}  // namespace

Net::Net(std::shared_ptr<const MetricGraph> graph, std::vector<GraphPoint> points)
    : graph_(std::move(graph)), points_(std::move(points)) {
  if (!graph_) throw DomainError("net needs a graph");
  if (points_.empty()) throw DomainError("net needs at least one point");
  for (auto& p : points_) p = graph_->canonical(p);
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      if (points_[i] == points_[j])
        throw DomainError("net points must be distinct");

  auto idx = build_index(*graph_, points_);
  radius_ = covering_radius(*graph_, idx);
  vertex_dist_ = std::move(idx.vdist);
  vertex_arg_ = std::move(idx.varg);
  on_edge_ = std::move(idx.on_edge);
}

const GraphPoint& Net::point(int i) const {
  if (i < 0 || i >= size()) throw DomainError("net point index out of range");
  return points_[i];
}

std::pair<double, int> Net::nearest_impl(const GraphPoint& pin) const {
  graph_->validate_point(pin);
  const Edge& e = graph_->edge(pin.edge);
  const double t = std::clamp(pin.offset, 0.0, e.length);

  double best = kInf;
  int arg = -1;
  auto consider = [&](double d, int i) {
    if (d < best || (d == best && i < arg)) {
      best = d;
      arg = i;
    }
  };
  // Direct distances along the edge are minimized by the offsets bracketing
  // t; points further out along the edge can only be closer through a
  // vertex, and those routes are covered by the endpoint candidates.
  const auto& lst = on_edge_[pin.edge];
  const auto it = std::lower_bound(lst.begin(), lst.end(), std::pair{t, -1});
  if (it != lst.begin()) consider(t - std::prev(it)->first, std::prev(it)->second);
  if (it != lst.end()) consider(it->first - t, it->second);
  consider(t + vertex_dist_[e.u], vertex_arg_[e.u]);
  consider((e.length - t) + vertex_dist_[e.v], vertex_arg_[e.v]);
  return {best, arg};
}

int Net::nearest_index(const GraphPoint& p) const { return nearest_impl(p).second; }

double Net::distance_to(const GraphPoint& p) const { return nearest_impl(p).first; }

Net build_eps_net(std::shared_ptr<const MetricGraph> graph, double eps,
                  int min_size, double sample_spacing) {
  if (!graph) throw DomainError("net needs a graph");
  if (!(eps > 0.0)) throw DomainError("net radius must be positive");
  const MetricGraph& g = *graph;
  double spacing = std::min(eps, g.min_edge_length()) / 4.0;
  if (sample_spacing > 0.0) spacing = std::min(spacing, sample_spacing);
  auto sample = sample_points(g, spacing);

  std::vector<GraphPoint> chosen{g.vertex_point(0)};
  std::vector<double> dist;
  auto reset_dist = [&] {
    dist.assign(sample.size(), kInf);
    for (std::size_t s = 0; s < sample.size(); ++s)
      for (const auto& c : chosen)
        dist[s] = std::min(dist[s], g.distance(sample[s], c));
  };
  reset_dist();

  while (true) {
    const double radius = covering_radius(g, build_index(g, chosen));
    if (radius <= eps && static_cast<int>(chosen.size()) >= min_size) break;
    std::size_t far = 0;
    for (std::size_t s = 1; s < sample.size(); ++s)
      if (dist[s] > dist[far]) far = s;
    if (dist[far] <= 0.0) {
      // Sample exhausted. Coverage is already below the sample spacing, so
      // only a min_size request can bring us here; densify and keep going.
      if (static_cast<int>(chosen.size()) >= min_size) break;
      spacing /= 2.0;
      sample = sample_points(g, spacing);
      reset_dist();
      continue;
    }
    chosen.push_back(g.canonical(sample[far]));
    for (std::size_t s = 0; s < sample.size(); ++s)
      dist[s] = std::min(dist[s], g.distance(sample[s], chosen.back()));
  }
  return Net(std::move(graph), std::move(chosen));
}

}  // namespace gp
