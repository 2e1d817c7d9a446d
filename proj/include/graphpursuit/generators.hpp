#pragma once

#include <memory>
#include <string>

#include "graphpursuit/metric_graph.hpp"

namespace gp {

std::shared_ptr<const MetricGraph> make_interval(double length);

/// Two arcs of half the circumference between two antipodal vertices.
std::shared_ptr<const MetricGraph> make_circle(double circumference);

/// Two vertices joined by three parallel edges.
std::shared_ptr<const MetricGraph> make_theta(double l1, double l2, double l3);

/// Square lattice scaled by `spacing`, clipped to the closed Euclidean
/// disk of the given radius around the origin, with 4-neighbor edges.
std::shared_ptr<const MetricGraph> make_grid_disk(double radius,
                                                  double spacing);

/// m-by-n lattice with wraparound in both directions, every edge of
/// length `spacing`. m = 2 or n = 2 produce parallel edges, which is the
/// correct quotient metric.
std::shared_ptr<const MetricGraph> make_torus_grid(int m, int n,
                                                   double spacing);

/// Random recursive tree: vertex i >= 1 attaches to a uniformly chosen
/// earlier vertex with edge length uniform in [0.25, 1]. Deterministic
/// for a given seed.
std::shared_ptr<const MetricGraph> make_random_tree(int n,
                                                    unsigned long long seed);

/// Cycle of `segments` edges, each circumference/segments long; as a
/// metric space this is the circle for every segment count >= 2.
std::shared_ptr<const MetricGraph> make_polygon(double circumference,
                                                int segments);

/// Parses a generator expression: interval(1), circle(1.0), theta(1,2,3),
/// grid-disk(1,0.1), torus-grid(4,4,0.25), random-tree(12,7),
/// polygon(1,8). Throws DomainError for malformed expressions, unknown
/// kinds, wrong arity, or invalid parameters.
std::shared_ptr<const MetricGraph> generate(const std::string& expr);

}  // namespace gp
