#include "graphpursuit/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace gp {

int horizon_steps(double T, double beta) {
  if (!(T > 0.0)) throw DomainError("horizon T must be positive");
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  const int n = static_cast<int>(std::ceil(T / beta - 1e-12));
  return std::max(n, 1);
}

namespace {

void check_bound_to(const Strategy& s, const MetricGraph* g, double beta,
                    const char* who) {
  if (s.graph_ptr().get() != g) {
    throw DomainError(std::string(who) + " strategy is bound to a different graph");
  }
  if (std::abs(s.beta() - beta) > kMetricTol) {
    throw DomainError(std::string(who) + " strategy was built for a different beta");
  }
}

GraphPoint audited_step(const MetricGraph& g, const GraphPoint& from,
                        const GraphPoint& to, double beta, const char* who,
                        int step) {
  g.validate_point(to);
  const double d = g.distance(from, to);
  if (d > beta + kMetricTol) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s emitted an inadmissible move at step %d: displacement "
                  "%.6g exceeds beta %.6g",
                  who, step, d, beta);
    throw ProtocolError(buf);
  }
  return to;
}

}  // namespace

void GameRecord::validate() const {
  if (!graph) throw DomainError("game record lost its graph");
  if (steps < 1) throw DomainError("game record needs at least one step");
  if (pursuer.size() != steps + 1 || evader.size() != steps + 1) {
    throw DomainError("game record trajectories disagree with the step count");
  }
  if (distances.size() != static_cast<std::size_t>(steps) + 1) {
    throw DomainError("game record distance column has the wrong length");
  }
  double lo = distances[0];
  int arg = 0;
  for (int i = 0; i <= steps; ++i) {
    const double d = graph->distance(pursuer.position(i), evader.position(i));
    if (std::abs(d - distances[i]) > kMetricTol) {
      throw DomainError("game record distances do not match the trajectories");
    }
    if (distances[static_cast<std::size_t>(i)] < lo) {
      lo = distances[static_cast<std::size_t>(i)];
      arg = i;
    }
  }
  if (std::abs(lo - min_distance) > kMetricTol || arg != argmin_step) {
    throw DomainError("game record min distance is stale");
  }
}

std::string GameRecord::to_csv() const {
  std::string out =
      "step,time,pursuer_edge,pursuer_offset,evader_edge,evader_offset,"
      "distance\n";
  char buf[256];
  for (int i = 0; i <= steps; ++i) {
    const GraphPoint& p = pursuer.position(i);
    const GraphPoint& e = evader.position(i);
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%d,%.17g,%d,%.17g,%.17g\n", i,
                  pursuer.time(i), p.edge, p.offset, e.edge, e.offset,
                  distances[static_cast<std::size_t>(i)]);
    out += buf;
  }
  return out;
}

GameRecord run_game(std::shared_ptr<const MetricGraph> graph,
                    Strategy& pursuer, Strategy& evader, const GraphPoint& L0,
                    const GraphPoint& M0, double beta, double T) {
  if (!graph) throw DomainError("run_game requires a graph");
  const int n = horizon_steps(T, beta);
  graph->validate_point(L0);
  graph->validate_point(M0);
  check_bound_to(pursuer, graph.get(), beta, "pursuer");
  check_bound_to(evader, graph.get(), beta, "evader");

  std::vector<GraphPoint> P{L0};
  std::vector<GraphPoint> E{M0};
  P.reserve(n + 1);
  E.reserve(n + 1);
  for (int i = 0; i < n; ++i) {
    // Both commit before either move lands.
    const std::span<const GraphPoint> p_pre(P.data(), P.size());
    const std::span<const GraphPoint> e_pre(E.data(), E.size());
    const GraphPoint p_next = pursuer.next(P.back(), e_pre);
    const GraphPoint e_next = evader.next(E.back(), p_pre);
    P.push_back(audited_step(*graph, P[i], p_next, beta, "pursuer", i + 1));
    E.push_back(audited_step(*graph, E[i], e_next, beta, "evader", i + 1));
  }

  std::vector<double> dist;
  dist.reserve(n + 1);
  double lo = graph->distance(P[0], E[0]);
  int arg = 0;
  for (int i = 0; i <= n; ++i) {
    const double d = graph->distance(P[i], E[i]);
    dist.push_back(d);
    if (d < lo) {
      lo = d;
      arg = i;
    }
  }

  return GameRecord{graph,
                    beta,
                    n,
                    Trajectory(graph, beta, std::move(P)),
                    Trajectory(graph, beta, std::move(E)),
                    std::move(dist),
                    lo,
                    arg};
}

double capture_radius_estimate(std::shared_ptr<const MetricGraph> graph,
                               const StrategyFactory& pursuer,
                               std::span<const StrategyFactory> evader_suite,
                               std::span<const GraphPoint> L0_set,
                               std::span<const GraphPoint> M0_set, double beta,
                               double T) {
  if (evader_suite.empty()) throw DomainError("evader suite must be nonempty");
  if (L0_set.empty() || M0_set.empty()) {
    throw DomainError("start sets must be nonempty");
  }
  double worst = 0.0;
  for (const StrategyFactory& make_e : evader_suite) {
    for (const GraphPoint& L0 : L0_set) {
      for (const GraphPoint& M0 : M0_set) {
        auto p = pursuer(L0, M0);
        auto e = make_e(L0, M0);
        const GameRecord rec = run_game(graph, *p, *e, L0, M0, beta, T);
        worst = std::max(worst, rec.min_distance);
      }
    }
  }
  return worst;
}

}  // namespace gp
