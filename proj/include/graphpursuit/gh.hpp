#pragma once

#include <memory>

#include "graphpursuit/metric_graph.hpp"

namespace gp {

/// |diam a - diam b| / 2, a lower bound on how far apart the spaces are.
double gh_diameter_lower_bound(const MetricGraph& a, const MetricGraph& b);

/// Certified upper bound on the Gromov-Hausdorff distance between two
/// graphs, from nets built at net_radius and the best bijection found
/// between them. Derivation is in the implementation; the result is never
/// below gh_diameter_lower_bound.
double gh_upper_bound(std::shared_ptr<const MetricGraph> a,
                      std::shared_ptr<const MetricGraph> b, double net_radius);

}  // namespace gp
