#include "graphpursuit/gh.hpp"

#include <algorithm>
#include <cmath>

#include "graphpursuit/correspondence.hpp"
#include "graphpursuit/nets.hpp"

namespace gp {

double gh_diameter_lower_bound(const MetricGraph& a, const MetricGraph& b) {
  return std::abs(a.diameter() - b.diameter()) / 2.0;
}

double gh_upper_bound(std::shared_ptr<const MetricGraph> a,
                      std::shared_ptr<const MetricGraph> b, double net_radius) {
  if (!a || !b) throw DomainError("gh_upper_bound needs two graphs");
  if (!(net_radius > 0.0)) throw DomainError("net radius must be positive");
  Net na = build_eps_net(a, net_radius);
  Net nb = build_eps_net(b, net_radius);
  while (na.size() != nb.size()) {
    if (na.size() < nb.size())
      na = build_eps_net(a, net_radius, nb.size());
    else
      nb = build_eps_net(b, net_radius, na.size());
  }
  const Correspondence corr = min_distortion_bijection(na, nb);
  // Hop through the nets: the first space lies within na.radius() of net A
  // (Hausdorff distance inside a common space), the graph of the bijection
  // is a correspondence between the finite nets so they differ by at most
  // distortion/2, and net B lies within nb.radius() of the second space.
  // The three hops add up by the triangle inequality for the distance
  // being bounded. With a heuristic pairing the distortion is only an
  // upper bound on the optimum, which keeps the result a valid bound.
  const double bound = corr.distortion / 2.0 + na.radius() + nb.radius();
  return std::max(bound, gh_diameter_lower_bound(*a, *b));
}

}  // namespace gp
