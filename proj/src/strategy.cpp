#include "graphpursuit/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "graphpursuit/pursuit.hpp"

namespace gp {

namespace {

constexpr int kMaxMaximinPositions = 200;
constexpr int kMaxMaximinHorizon = 12;

// Directed edge entry: walking onto `edge` starting from endpoint u (entry_u)
// or from endpoint v.
struct Direction {
  int edge;
  bool entry_u;
};

std::vector<Direction> outgoing(const MetricGraph& g, int vertex,
                                const Direction* arrived) {
  std::vector<Direction> out;
  for (int e : g.incident(vertex)) {
    const Edge& ed = g.edge(e);
    if (ed.u == vertex) out.push_back({e, true});
    if (ed.v == vertex && !(ed.u == ed.v)) out.push_back({e, false});
    if (ed.u == ed.v && ed.u == vertex) out.push_back({e, false});
  }
  if (arrived != nullptr) {
    // Arriving via (edge, entry_u) means we stand at the opposite endpoint;
    // the forbidden reversal is the same edge entered from where we stand.
    const Direction rev{arrived->edge, !arrived->entry_u};
    std::erase_if(out, [&](const Direction& d) {
      return d.edge == rev.edge && d.entry_u == rev.entry_u;
    });
  }
  return out;
}

void walk(const MetricGraph& g, const Direction& dir, double budget, int depth,
          std::vector<GraphPoint>& out) {
  if (depth > 64 || out.size() > 20000) {
    throw DomainError("candidate move enumeration exploded; beta is too large for this graph");
  }
  const Edge& ed = g.edge(dir.edge);
  const double slack = 1e-12 * std::max(1.0, ed.length);
  if (budget < ed.length - slack) {
    const double off = dir.entry_u ? budget : ed.length - budget;
    out.push_back(g.canonical(GraphPoint{dir.edge, off}));
    return;
  }
  const int reached = dir.entry_u ? ed.v : ed.u;
  const double rest = budget - ed.length;
  if (rest <= slack) {
    out.push_back(g.vertex_point(reached));
    return;
  }
  const std::vector<Direction> next = outgoing(g, reached, &dir);
  if (next.empty()) {
    out.push_back(g.vertex_point(reached));  // dead end short of the budget
    return;
  }
  for (const Direction& d : next) walk(g, d, rest, depth + 1, out);
}

class GreedyPursuer final : public Strategy {
 public:
  using Strategy::Strategy;

  GraphPoint next(const GraphPoint& own,
                  std::span<const GraphPoint> opponent_prefix) override {
    if (opponent_prefix.empty()) {
      throw DomainError("strategy needs at least the opponent's current position");
    }
    return beta_pursuit_step(*graph_, own, opponent_prefix.back(), beta_);
  }
};

// Runs from where a greedy chaser would stand next, not from where the
// chaser stands now; against a simultaneous mover the latter concedes a
// step of ground at antipodal configurations.
class FleeEvader final : public Strategy {
 public:
  using Strategy::Strategy;

  GraphPoint next(const GraphPoint& own,
                  std::span<const GraphPoint> opponent_prefix) override {
    if (opponent_prefix.empty()) {
      throw DomainError("strategy needs at least the opponent's current position");
    }
    const GraphPoint predicted =
        beta_pursuit_step(*graph_, opponent_prefix.back(), own, beta_);
    GraphPoint best = own;
    double best_d = graph_->distance(own, predicted);
    for (const GraphPoint& c : forward_moves(*graph_, own, beta_)) {
      const double d = graph_->distance(c, predicted);
      if (d > best_d) {
        best = c;
        best_d = d;
      }
    }
    return best;
  }
};

class ScriptedEvader final : public Strategy {
 public:
  ScriptedEvader(std::shared_ptr<const MetricGraph> graph, double beta,
                 std::vector<GraphPoint> script)
      : Strategy(std::move(graph), beta), script_(std::move(script)) {
    if (script_.empty()) throw DomainError("scripted evader needs a nonempty script");
    for (const GraphPoint& p : script_) graph_->validate_point(p);
    for (std::size_t i = 0; i + 1 < script_.size(); ++i) {
      if (graph_->distance(script_[i], script_[i + 1]) > beta_ + kMetricTol) {
        throw DomainError("scripted evader step exceeds beta");
      }
    }
  }

  GraphPoint next(const GraphPoint&, std::span<const GraphPoint>) override {
    ++step_;
    const std::size_t i =
        std::min(static_cast<std::size_t>(step_), script_.size() - 1);
    return script_[i];
  }

 private:
  std::vector<GraphPoint> script_;
  long step_ = 0;
};

class RandomWalkEvader final : public Strategy {
 public:
  RandomWalkEvader(std::shared_ptr<const MetricGraph> graph, double beta,
                   unsigned long long seed)
      : Strategy(std::move(graph), beta), rng_(seed) {}

  GraphPoint next(const GraphPoint& own,
                  std::span<const GraphPoint>) override {
    std::vector<GraphPoint> candidates{own};
    for (const GraphPoint& c : forward_moves(*graph_, own, beta_)) {
      candidates.push_back(c);
    }
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    return candidates[pick(rng_)];
  }

 private:
  std::mt19937_64 rng_;
};

// Depth-limited adversarial search on a beta/2 grid. The grid is capped at
// 200 positions, so this is only usable on small graphs or with a coarse
// step.
class MaximinEvader final : public Strategy {
 public:
  MaximinEvader(std::shared_ptr<const MetricGraph> graph, double beta,
                int horizon)
      : Strategy(std::move(graph), beta),
        horizon_(std::clamp(horizon, 1, kMaxMaximinHorizon)) {
    build_grid();
    build_moves();
    trim_horizon();
    build_values();
  }

  GraphPoint next(const GraphPoint& own,
                  std::span<const GraphPoint> opponent_prefix) override {
    if (opponent_prefix.empty()) {
      throw DomainError("strategy needs at least the opponent's current position");
    }
    const int p = snap(opponent_prefix.back());
    int best = -1;
    double best_v = -1.0;
    for (int j = 0; j < n_; ++j) {
      if (graph_->distance(own, grid_[j]) > beta_ + kMetricTol) continue;
      const double v = response_value(j, p);
      if (v > best_v) {
        best = j;
        best_v = v;
      }
    }
    if (best < 0) best = snap(own);  // grid covers the graph within beta/4
    return grid_[best];
  }

 private:
  void build_grid() {
    for (int v = 0; v < graph_->vertex_count(); ++v) {
      grid_.push_back(graph_->vertex_point(v));
    }
    const double s = beta_ / 2.0;
    for (int e = 0; e < graph_->edge_count(); ++e) {
      const double len = graph_->edge(e).length;
      for (int j = 1; j * s < len - 1e-12 * std::max(1.0, len); ++j) {
        grid_.push_back(GraphPoint{e, j * s});
      }
    }
    n_ = static_cast<int>(grid_.size());
    if (n_ > kMaxMaximinPositions) {
      throw DomainError("maximin grid exceeds 200 positions; use a larger beta or a smaller graph");
    }
    dist_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        dist_[static_cast<std::size_t>(i) * n_ + j] =
            graph_->distance(grid_[i], grid_[j]);
      }
    }
  }

  void build_moves() {
    moves_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (d(i, j) <= beta_ + kMetricTol) moves_[i].push_back(j);
      }
    }
  }

  void trim_horizon() {
    double total = 0.0;
    for (const auto& m : moves_) total += static_cast<double>(m.size());
    while (horizon_ > 1 && total * total * horizon_ > 1e8) --horizon_;
  }

  // value_[e*n+p] after build = best min-distance the evader can force over
  // horizon_ steps from (evader e, pursuer p), pursuer responding worst-case.
  void build_values() {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(static_cast<std::size_t>(n_) * n_, inf);
    value_.assign(static_cast<std::size_t>(n_) * n_, inf);
    for (int k = 1; k <= horizon_; ++k) {
      for (int e = 0; e < n_; ++e) {
        for (int p = 0; p < n_; ++p) {
          double best = -inf;
          for (int e2 : moves_[e]) {
            double worst = inf;
            for (int p2 : moves_[p]) {
              const double v = std::min(d(e2, p2), prev[idx(e2, p2)]);
              worst = std::min(worst, v);
            }
            best = std::max(best, worst);
          }
          value_[idx(e, p)] = best;
        }
      }
      std::swap(prev, value_);
    }
    std::swap(prev, value_);
  }

  double response_value(int e2, int p) const {
    double worst = std::numeric_limits<double>::infinity();
    for (int p2 : moves_[p]) {
      worst = std::min(worst, std::min(d(e2, p2), value_[idx(e2, p2)]));
    }
    return worst;
  }

  int snap(const GraphPoint& p) const {
    int arg = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) {
      const double di = graph_->distance(p, grid_[i]);
      if (di < best) {
        best = di;
        arg = i;
      }
    }
    return arg;
  }

  std::size_t idx(int e, int p) const {
    return static_cast<std::size_t>(e) * n_ + p;
  }
  double d(int i, int j) const { return dist_[idx(i, j)]; }

  int horizon_;
  int n_ = 0;
  std::vector<GraphPoint> grid_;
  std::vector<double> dist_;
  std::vector<std::vector<int>> moves_;
  std::vector<double> value_;
};

}  // namespace

Strategy::Strategy(std::shared_ptr<const MetricGraph> graph, double beta)
    : graph_(std::move(graph)), beta_(beta) {
  if (!graph_) throw DomainError("strategy requires a graph");
  if (!(beta_ > 0.0)) throw DomainError("beta must be positive");
}

std::vector<GraphPoint> forward_moves(const MetricGraph& g,
                                      const GraphPoint& from, double budget) {
  if (!(budget > 0.0)) throw DomainError("move budget must be positive");
  const GraphPoint p = g.canonical(from);
  std::vector<GraphPoint> raw;
  const int v = g.vertex_of(p);
  if (v >= 0) {
    for (const Direction& d : outgoing(g, v, nullptr)) walk(g, d, budget, 0, raw);
  } else {
    const Edge& ed = g.edge(p.edge);
    // Toward u: consume p.offset first; toward v: the rest of the edge.
    if (budget < p.offset - 1e-12 * std::max(1.0, ed.length)) {
      raw.push_back(GraphPoint{p.edge, p.offset - budget});
    } else {
      const Direction arrival{p.edge, false};  // we walked u-ward, as if entered from v
      const double rest = budget - p.offset;
      if (rest <= 1e-12 * std::max(1.0, ed.length)) {
        raw.push_back(g.vertex_point(ed.u));
      } else {
        const auto next = outgoing(g, ed.u, &arrival);
        if (next.empty()) {
          raw.push_back(g.vertex_point(ed.u));
        } else {
          for (const Direction& d : next) walk(g, d, rest, 0, raw);
        }
      }
    }
    walk(g, Direction{p.edge, true}, budget + p.offset, 0, raw);
  }
  std::vector<GraphPoint> out;
  for (const GraphPoint& c : raw) {
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const GraphPoint& q) { return q == c; });
    if (!seen) out.push_back(c);
  }
  return out;
}

std::unique_ptr<Strategy> greedy_pursuer(
    std::shared_ptr<const MetricGraph> graph, double beta) {
  return std::make_unique<GreedyPursuer>(std::move(graph), beta);
}

EvaderKind parse_evader_kind(const std::string& name) {
  if (name == "flee") return EvaderKind::flee;
  if (name == "scripted") return EvaderKind::scripted;
  if (name == "random-walk") return EvaderKind::random_walk;
  if (name == "maximin") return EvaderKind::maximin;
  throw DomainError("unknown evader kind '" + name +
                    "'; valid kinds: flee, scripted, random-walk, maximin");
}

std::unique_ptr<Strategy> make_evader(std::shared_ptr<const MetricGraph> graph,
                                      double beta, EvaderKind kind,
                                      const EvaderParams& params) {
  switch (kind) {
    case EvaderKind::flee:
      return std::make_unique<FleeEvader>(std::move(graph), beta);
    case EvaderKind::scripted:
      return std::make_unique<ScriptedEvader>(std::move(graph), beta,
                                              params.script);
    case EvaderKind::random_walk:
      return std::make_unique<RandomWalkEvader>(std::move(graph), beta,
                                                params.seed);
    case EvaderKind::maximin:
      return std::make_unique<MaximinEvader>(std::move(graph), beta,
                                             params.horizon);
  }
  throw DomainError("unknown evader kind");
}

}  // namespace gp
