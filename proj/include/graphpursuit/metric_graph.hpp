#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gp {

/// Absolute tolerance for all metric assertions in this library.
inline constexpr double kMetricTol = 1e-9;

/// Raised when an argument is outside the operation's input domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  int u = 0;
  int v = 0;
  double length = 0.0;
};

/// A point of the graph's metric space: a position on an edge.
/// Vertices have several representations; canonical() picks one.
struct GraphPoint {
  int edge = 0;
  double offset = 0.0;

  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;
};

struct GeodesicSegment {
  int edge = 0;
  double from = 0.0;  // entry offset on the edge
  double to = 0.0;    // exit offset; |to - from| is the traversed length
};

/// An isometrically parameterized shortest path between two points.
class GeodesicPath {
 public:
  GeodesicPath(GraphPoint start, GraphPoint end, double length,
               std::vector<GeodesicSegment> segments,
               std::vector<int> waypoints);

  const GraphPoint& start() const { return start_; }
  const GraphPoint& end() const { return end_; }
  double length() const { return length_; }
  std::span<const GeodesicSegment> segments() const { return segments_; }
  /// Vertices traversed between the endpoints, in order.
  std::span<const int> waypoints() const { return waypoints_; }

  /// Point at arc-length s from the start, 0 <= s <= length().
  GraphPoint point_along(double s) const;

 private:
  GraphPoint start_;
  GraphPoint end_;
  double length_ = 0.0;
  std::vector<GeodesicSegment> segments_;
  std::vector<int> waypoints_;
};

/// Finite weighted multigraph carrying its shortest-path metric.
/// Immutable after construction; all-pairs vertex distances are
/// precomputed, so concurrent read access is safe.
class MetricGraph {
 public:
  /// Vertices are 0..vertex_count-1. Throws DomainError on nonpositive
  /// edge lengths, out-of-range endpoints, or a disconnected graph.
  MetricGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int id) const;
  std::span<const Edge> edges() const { return edges_; }
  /// Edge ids incident to v, ascending.
  std::span<const int> incident(int v) const;

  double vertex_distance(int u, int v) const;
  double distance(const GraphPoint& p, const GraphPoint& q) const;
  GeodesicPath geodesic(const GraphPoint& p, const GraphPoint& q) const;

  /// Canonical representation: an interior point is unchanged; a vertex
  /// becomes (lowest incident edge id, offset 0 or the edge length).
  GraphPoint canonical(const GraphPoint& p) const;
  /// Canonical point for a vertex.
  GraphPoint vertex_point(int v) const;
  /// Vertex id if p sits exactly on a vertex.
  int vertex_of(const GraphPoint& p) const;  // -1 if interior

  /// Throws DomainError if the edge id or offset is invalid.
  void validate_point(const GraphPoint& p) const;

  double min_edge_length() const { return min_edge_length_; }
  double total_edge_length() const { return total_edge_length_; }
  /// Max pairwise distance over vertices and edge midpoints. Exact for
  /// the graph families shipped here; in general a lower bound on the
  /// diameter of the full space.
  double diameter() const { return diameter_; }

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::vector<double> vdist_;  // vertex_count^2, symmetric
  double min_edge_length_ = 0.0;
  double total_edge_length_ = 0.0;
  double diameter_ = 0.0;

  void compute_vertex_distances();
};

/// Splits edges so every edge length is <= max_edge_length. Inserts
/// degree-2 vertices only; distances are preserved.
MetricGraph subdivide(const MetricGraph& g, double max_edge_length);

/// Adds an independent uniform [-magnitude, +magnitude] amount to each
/// edge length. Deterministic for a given seed. Requires
/// magnitude < min edge length so the result stays valid.
MetricGraph perturb_lengths(const MetricGraph& g, double magnitude,
                            unsigned long long seed);

/// Evenly spaced points covering the whole graph: all vertices plus
/// interior points at spacing <= `spacing` on every edge. If max_points
/// is positive, the spacing is widened as needed to respect the cap.
std::vector<GraphPoint> sample_points(const MetricGraph& g, double spacing,
                                      int max_points = 0);

std::string graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(const std::string& text);

}  // namespace gp
