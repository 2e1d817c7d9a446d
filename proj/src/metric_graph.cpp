#include "graphpursuit/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <unordered_map>

#include "json.hpp"

namespace gp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Near-equality for path-length ties.
bool tie_equal(double a, double b, double scale) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, scale);
}

}  // namespace

GeodesicPath::GeodesicPath(GraphPoint start, GraphPoint end, double length,
                           std::vector<GeodesicSegment> segments,
                           std::vector<int> waypoints)
    : start_(start),
      end_(end),
      length_(length),
      segments_(std::move(segments)),
      waypoints_(std::move(waypoints)) {}

GraphPoint GeodesicPath::point_along(double s) const {
  if (s < -kMetricTol || s > length_ + kMetricTol) {
    throw DomainError("point_along: arc length " + std::to_string(s) +
                      " outside [0, " + std::to_string(length_) + "]");
  }
  s = std::clamp(s, 0.0, length_);
  if (segments_.empty()) return start_;
  double acc = 0.0;
  for (const auto& seg : segments_) {
    const double len = std::abs(seg.to - seg.from);
    if (s <= acc + len + 1e-15) {
      const double local = std::clamp(s - acc, 0.0, len);
      const double off = seg.from + (seg.to >= seg.from ? local : -local);
      return {seg.edge, std::clamp(off, std::min(seg.from, seg.to),
                                   std::max(seg.from, seg.to))};
    }
    acc += len;
  }
  return end_;
}

MetricGraph::MetricGraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ <= 0) throw DomainError("graph must have at least one vertex");
  if (edges_.empty()) throw DomainError("graph must have at least one edge");
  min_edge_length_ = kInf;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.u < 0 || e.u >= vertex_count_ || e.v < 0 || e.v >= vertex_count_) {
      throw DomainError("edge " + std::to_string(i) + " references unknown vertex");
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw DomainError("edge " + std::to_string(i) +
                        " has nonpositive length " + std::to_string(e.length));
    }
    min_edge_length_ = std::min(min_edge_length_, e.length);
    total_edge_length_ += e.length;
  }
  incident_.assign(vertex_count_, {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    incident_[edges_[i].u].push_back(static_cast<int>(i));
    if (edges_[i].v != edges_[i].u)
      incident_[edges_[i].v].push_back(static_cast<int>(i));
  }
  compute_vertex_distances();

  // Connectivity: every vertex must be reachable from vertex 0.
  for (int v = 0; v < vertex_count_; ++v) {
    if (vdist_[v] == kInf) throw DomainError("graph is not connected");
  }

  // Diameter over vertices and edge midpoints.
  std::vector<GraphPoint> pts;
  pts.reserve(vertex_count_ + edges_.size());
  for (int v = 0; v < vertex_count_; ++v) pts.push_back(vertex_point(v));
  for (std::size_t i = 0; i < edges_.size(); ++i)
    pts.push_back({static_cast<int>(i), edges_[i].length * 0.5});
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      diameter_ = std::max(diameter_, distance(pts[i], pts[j]));
}

void MetricGraph::compute_vertex_distances() {
  const int n = vertex_count_;
  vdist_.assign(static_cast<std::size_t>(n) * n, kInf);
  using Item = std::pair<double, int>;
  for (int src = 0; src < n; ++src) {
    double* dist = &vdist_[static_cast<std::size_t>(src) * n];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
      auto [d, z] = pq.top();
      pq.pop();
      if (d > dist[z]) continue;
      for (int eid : incident_[z]) {
        const Edge& e = edges_[eid];
        const int y = (e.u == z) ? e.v : e.u;
        const double nd = d + e.length;
        if (nd < dist[y]) {
          dist[y] = nd;
          pq.emplace(nd, y);
        }
      }
    }
  }
  // Enforce exact symmetry.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = std::min(vdist_[static_cast<std::size_t>(i) * n + j],
                                vdist_[static_cast<std::size_t>(j) * n + i]);
      vdist_[static_cast<std::size_t>(i) * n + j] = d;
      vdist_[static_cast<std::size_t>(j) * n + i] = d;
    }
}

const Edge& MetricGraph::edge(int id) const {
  if (id < 0 || id >= edge_count())
    throw DomainError("invalid edge id " + std::to_string(id));
  return edges_[id];
}

std::span<const int> MetricGraph::incident(int v) const {
  if (v < 0 || v >= vertex_count_)
    throw DomainError("invalid vertex id " + std::to_string(v));
  return incident_[v];
}

double MetricGraph::vertex_distance(int u, int v) const {
  if (u < 0 || u >= vertex_count_ || v < 0 || v >= vertex_count_)
    throw DomainError("invalid vertex id");
  return vdist_[static_cast<std::size_t>(u) * vertex_count_ + v];
}

void MetricGraph::validate_point(const GraphPoint& p) const {
  if (p.edge < 0 || p.edge >= edge_count())
    throw DomainError("point references invalid edge id " + std::to_string(p.edge));
  const double len = edges_[p.edge].length;
  if (!(p.offset >= -kMetricTol) || !(p.offset <= len + kMetricTol))
    throw DomainError("point offset " + std::to_string(p.offset) +
                      " outside [0, " + std::to_string(len) + "]");
}

int MetricGraph::vertex_of(const GraphPoint& p) const {
  const Edge& e = edges_[p.edge];
  if (p.offset == 0.0) return e.u;
  if (p.offset == e.length) return e.v;
  return -1;
}

GraphPoint MetricGraph::vertex_point(int v) const {
  const auto inc = incident(v);
  const int eid = inc.front();  // lowest incident edge id
  const Edge& e = edges_[eid];
  if (e.u == v) return {eid, 0.0};
  return {eid, e.length};
}

GraphPoint MetricGraph::canonical(const GraphPoint& p) const {
  validate_point(p);
  GraphPoint q{p.edge, std::clamp(p.offset, 0.0, edges_[p.edge].length)};
  const int v = vertex_of(q);
  if (v >= 0) return vertex_point(v);
  return q;
}

double MetricGraph::distance(const GraphPoint& p, const GraphPoint& q) const {
  validate_point(p);
  validate_point(q);
  const Edge& ep = edges_[p.edge];
  const Edge& eq = edges_[q.edge];
  const double a = std::clamp(p.offset, 0.0, ep.length);
  const double b = std::clamp(q.offset, 0.0, eq.length);

  double best = kInf;
  if (p.edge == q.edge) best = std::abs(a - b);

  // Any other route exits p's edge at an endpoint and enters q's edge at
  // one. Summation order is fixed (smaller stub first) so the result is
  // exactly symmetric in p and q.
  const int pw[2] = {ep.u, ep.v};
  const double ps[2] = {a, ep.length - a};
  const int qw[2] = {eq.u, eq.v};
  const double qs[2] = {b, eq.length - b};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double lo = std::min(ps[i], qs[j]);
      const double hi = std::max(ps[i], qs[j]);
      const double cand =
          (lo + hi) + vdist_[static_cast<std::size_t>(pw[i]) * vertex_count_ + qw[j]];
      best = std::min(best, cand);
    }
  return best;
}

namespace {

struct RouteCandidate {
  double length = kInf;
  std::vector<GeodesicSegment> segments;
  std::vector<int> waypoints;
  std::vector<int> edge_seq;

  bool valid() const { return length < kInf; }
};

// true if a is preferred over b
bool route_less(const RouteCandidate& a, const RouteCandidate& b, double scale) {
  if (!b.valid()) return a.valid();
  if (!a.valid()) return false;
  if (!tie_equal(a.length, b.length, scale)) return a.length < b.length;
  if (a.edge_seq != b.edge_seq) return a.edge_seq < b.edge_seq;
  return a.waypoints < b.waypoints;
}

}  // namespace

GeodesicPath MetricGraph::geodesic(const GraphPoint& pin, const GraphPoint& qin) const {
  validate_point(pin);
  validate_point(qin);
  const GraphPoint p{pin.edge, std::clamp(pin.offset, 0.0, edges_[pin.edge].length)};
  const GraphPoint q{qin.edge, std::clamp(qin.offset, 0.0, edges_[qin.edge].length)};
  const Edge& ep = edges_[p.edge];
  const Edge& eq = edges_[q.edge];
  const double scale = total_edge_length_;
  const double target = distance(p, q);

  RouteCandidate best;

  if (p.edge == q.edge && tie_equal(std::abs(p.offset - q.offset), target, scale)) {
    RouteCandidate direct;
    direct.length = std::abs(p.offset - q.offset);
    direct.segments = {{p.edge, p.offset, q.offset}};
    if (direct.length > 0.0) direct.edge_seq = {p.edge};
    if (route_less(direct, best, scale)) best = std::move(direct);
  }

  const int pw[2] = {ep.u, ep.v};
  const double ps[2] = {p.offset, ep.length - p.offset};
  const double pexit[2] = {0.0, ep.length};
  const int qw[2] = {eq.u, eq.v};
  const double qs[2] = {q.offset, eq.length - q.offset};
  const double qentry[2] = {0.0, eq.length};

  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double len = ps[i] + vertex_distance(pw[i], qw[j]) + qs[j];
      if (!tie_equal(len, target, scale) && len > target) continue;

      RouteCandidate cand;
      cand.length = len;
      if (ps[i] > 0.0) {
        cand.segments.push_back({p.edge, p.offset, pexit[i]});
        cand.edge_seq.push_back(p.edge);
      }
      cand.waypoints.push_back(pw[i]);

      // Greedy walk toward qw[j], taking the smallest edge id that stays
      // on a shortest path; yields the lexicographically smallest edge
      // sequence among shortest vertex paths.
      int z = pw[i];
      bool ok = true;
      int guard = vertex_count_ + edge_count() + 2;
      while (z != qw[j]) {
        if (--guard < 0) { ok = false; break; }
        const double remaining = vertex_distance(z, qw[j]);
        int pick = -1;
        int pick_next = -1;
        for (int eid : incident_[z]) {
          const Edge& e = edges_[eid];
          const int y = (e.u == z) ? e.v : e.u;
          if (tie_equal(e.length + vertex_distance(y, qw[j]), remaining, scale)) {
            pick = eid;
            pick_next = y;
            break;  // incident lists are ascending by edge id
          }
        }
        if (pick < 0) { ok = false; break; }
        const Edge& e = edges_[pick];
        cand.segments.push_back(e.u == z ? GeodesicSegment{pick, 0.0, e.length}
                                         : GeodesicSegment{pick, e.length, 0.0});
        cand.edge_seq.push_back(pick);
        cand.waypoints.push_back(pick_next);
        z = pick_next;
      }
      if (!ok) continue;
      if (qs[j] > 0.0) {
        cand.segments.push_back({q.edge, qentry[j], q.offset});
        cand.edge_seq.push_back(q.edge);
      }
      if (route_less(cand, best, scale)) best = std::move(cand);
    }
  }

  if (!best.valid())
    throw std::logic_error("geodesic: failed to reconstruct a shortest path");
  if (best.segments.empty()) best.segments = {{p.edge, p.offset, p.offset}};
  return GeodesicPath(p, q, best.length, std::move(best.segments),
                      std::move(best.waypoints));
}

MetricGraph subdivide(const MetricGraph& g, double max_edge_length) {
  if (!(max_edge_length > 0.0))
    throw DomainError("max_edge_length must be positive");
  std::vector<Edge> edges;
  int next_vertex = g.vertex_count();
  for (const Edge& e : g.edges()) {
    int k = static_cast<int>(std::ceil(e.length / max_edge_length - 1e-12));
    if (k < 1) k = 1;
    while (e.length / k > max_edge_length + 1e-12) ++k;
    if (k == 1) {
      edges.push_back(e);
      continue;
    }
    const double piece = e.length / k;
    int prev = e.u;
    for (int i = 1; i < k; ++i) {
      const int mid = next_vertex++;
      edges.push_back({prev, mid, piece});
      prev = mid;
    }
    edges.push_back({prev, e.v, piece});
  }
  return MetricGraph(next_vertex, std::move(edges));
}

MetricGraph perturb_lengths(const MetricGraph& g, double magnitude,
                            unsigned long long seed) {
  if (magnitude < 0.0) throw DomainError("magnitude must be nonnegative");
  if (magnitude >= g.min_edge_length())
    throw DomainError("magnitude " + std::to_string(magnitude) +
                      " must be smaller than the shortest edge length " +
                      std::to_string(g.min_edge_length()));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> delta(-magnitude, magnitude);
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (Edge& e : edges) e.length += (magnitude > 0.0 ? delta(rng) : 0.0);
  return MetricGraph(g.vertex_count(), std::move(edges));
}

std::vector<GraphPoint> sample_points(const MetricGraph& g, double spacing,
                                      int max_points) {
  if (!(spacing > 0.0)) throw DomainError("spacing must be positive");
  auto count_for = [&](double s) {
    long long c = g.vertex_count();
    for (const Edge& e : g.edges())
      c += static_cast<long long>(std::ceil(e.length / s - 1e-12)) - 1;
    return c;
  };
  if (max_points > 0) {
    while (count_for(spacing) > max_points && spacing < 4.0 * g.total_edge_length())
      spacing *= 1.5;
  }
  std::vector<GraphPoint> pts;
  pts.reserve(static_cast<std::size_t>(count_for(spacing)));
  for (int v = 0; v < g.vertex_count(); ++v) pts.push_back(g.vertex_point(v));
  for (int eid = 0; eid < g.edge_count(); ++eid) {
    const Edge& e = g.edge(eid);
    const int k = std::max(1, static_cast<int>(std::ceil(e.length / spacing - 1e-12)));
    for (int i = 1; i < k; ++i) pts.push_back({eid, e.length * i / k});
  }
  return pts;
}

std::string graph_to_json(const MetricGraph& g) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < g.vertex_count(); ++v) j["vertices"].push_back(v);
  j["edges"] = nlohmann::json::array();
  for (const Edge& e : g.edges())
    j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"length", e.length}});
  return j.dump(2);
}

MetricGraph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& ex) {
    throw DomainError(std::string("graph parse error: ") + ex.what());
  }
  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw DomainError("graph file missing 'vertices' array");
  if (!j.contains("edges") || !j["edges"].is_array())
    throw DomainError("graph file missing 'edges' array");

  std::vector<long long> ids;
  for (const auto& v : j["vertices"]) {
    if (!v.is_number_integer()) throw DomainError("vertex ids must be integers");
    ids.push_back(v.get<long long>());
  }
  std::unordered_map<long long, int> index;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!index.emplace(ids[i], static_cast<int>(i)).second)
      throw DomainError("duplicate vertex id " + std::to_string(ids[i]));
  }
  std::vector<Edge> edges;
  for (const auto& je : j["edges"]) {
    if (!je.contains("u") || !je.contains("v") || !je.contains("length"))
      throw DomainError("edge entries need fields u, v, length");
    const auto u = index.find(je["u"].get<long long>());
    const auto v = index.find(je["v"].get<long long>());
    if (u == index.end() || v == index.end())
      throw DomainError("edge references a vertex id not in 'vertices'");
    edges.push_back({u->second, v->second, je["length"].get<double>()});
  }
  return MetricGraph(static_cast<int>(ids.size()), std::move(edges));
}

}  // namespace gp
