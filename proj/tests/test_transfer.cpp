#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphpursuit/chaining.hpp"
#include "graphpursuit/game.hpp"
#include "graphpursuit/metric_graph.hpp"
#include "graphpursuit/strategy.hpp"
#include "graphpursuit/transfer.hpp"

using namespace gp;

namespace {

std::shared_ptr<const MetricGraph> interval(double len = 1.0) {
  return std::make_shared<MetricGraph>(2, std::vector<Edge>{{0, 1, len}});
}

std::shared_ptr<const MetricGraph> theta() {
  return std::make_shared<MetricGraph>(
      2, std::vector<Edge>{{0, 1, 1.0}, {0, 1, 2.0}, {0, 1, 3.0}});
}

std::unique_ptr<Strategy> hold(std::shared_ptr<const MetricGraph> g,
                               double beta, const GraphPoint& at) {
  EvaderParams p;
  p.script = {at};
  return make_evader(std::move(g), beta, EvaderKind::scripted, p);
}

class Teleporter final : public Strategy {
 public:
  Teleporter(std::shared_ptr<const MetricGraph> g, double beta, GraphPoint to)
      : Strategy(std::move(g), beta), to_(to) {}
  GraphPoint next(const GraphPoint&, std::span<const GraphPoint>) override {
    return to_;
  }

 private:
  GraphPoint to_;
};

// The point at a given arc length from vertex 0 along a chain graph.
GraphPoint along_chain(const MetricGraph& g, double s) {
  if (s <= 0.0) return g.vertex_point(0);
  const auto moves = forward_moves(g, g.vertex_point(0), s);
  REQUIRE(moves.size() == 1);
  return moves[0];
}

struct AlignedPair {
  std::shared_ptr<const MetricGraph> a, b;
  std::shared_ptr<const Chaining> ch;
};

// Unit interval vs. a perturbed 4-piece subdivision, with nets laid
// down at matching arc-length fractions so the pairing is honest.
AlignedPair perturbed_interval_chaining(double eps, double net_spacing,
                                        unsigned long long seed = 5) {
  AlignedPair out;
  out.a = interval(1.0);
  const MetricGraph sub = subdivide(*out.a, 0.25);
  out.b = std::make_shared<MetricGraph>(
      perturb_lengths(sub, eps / sub.edge_count(), seed));

  const double total_b = out.b->total_edge_length();
  const int n = static_cast<int>(std::ceil(1.0 / net_spacing));
  std::vector<GraphPoint> pa, pb;
  for (int j = 0; j <= n; ++j) {
    const double t = std::min(1.0, j * net_spacing);
    pa.push_back(GraphPoint{0, t});
    pb.push_back(along_chain(*out.b, t * total_b));
  }
  out.ch = std::make_shared<Chaining>(
      make_chaining(out.a, out.b, std::move(pa), std::move(pb), eps));
  return out;
}

}  // namespace

TEST_CASE("transfer insists on the proof's beta unless overridden") {
  auto g = interval();
  auto ch = std::make_shared<Chaining>(build_chaining(g, g, 0.01));
  CHECK(transfer_beta(*ch) == doctest::Approx(0.1));

  CHECK_THROWS_WITH_AS(
      transfer_strategy(ch, greedy_pursuer(g, 0.05), 0.05, 1.0,
                        GraphPoint{0, 0.0}),
      doctest::Contains("sqrt"), DomainError);

  TransferOptions opts;
  opts.allow_beta_override = true;
  auto t = transfer_strategy(ch, greedy_pursuer(g, 0.05), 0.05, 1.0,
                             GraphPoint{0, 0.0}, opts);
  CHECK(t->beta_overridden());
  CHECK(t->alpha_unchecked());

  auto ok = transfer_strategy(ch, greedy_pursuer(g, 0.1), 0.1, 1.0,
                              GraphPoint{0, 0.0});
  CHECK_FALSE(ok->beta_overridden());
}

TEST_CASE("transfer checks the capture radius preconditions when given") {
  auto g = interval();
  auto ch = std::make_shared<Chaining>(build_chaining(g, g, 0.01));
  const double beta = transfer_beta(*ch);

  TransferOptions bad_alpha;
  bad_alpha.alpha = 1.2;
  CHECK_THROWS_AS(transfer_strategy(ch, greedy_pursuer(g, beta), beta, 1.0,
                                    GraphPoint{0, 0.0}, bad_alpha),
                  DomainError);

  // budget 0.01 is not below alpha^2 = 0.0025
  TransferOptions tight;
  tight.alpha = 0.05;
  CHECK_THROWS_AS(transfer_strategy(ch, greedy_pursuer(g, beta), beta, 1.0,
                                    GraphPoint{0, 0.0}, tight),
                  DomainError);

  TransferOptions fine;
  fine.alpha = 0.2;
  auto t = transfer_strategy(ch, greedy_pursuer(g, beta), beta, 1.0,
                             GraphPoint{0, 0.0}, fine);
  CHECK_FALSE(t->alpha_unchecked());

  CHECK_THROWS_AS(transfer_strategy(ch, greedy_pursuer(interval(2.0), beta),
                                    beta, 1.0, GraphPoint{0, 0.0}),
                  DomainError);
}

TEST_CASE("stationary inner play parks the pursuer at the mapped point") {
  auto g = interval();
  auto ch = std::make_shared<Chaining>(build_chaining(g, g, 0.01));
  const double beta = transfer_beta(*ch);
  const GraphPoint L0{0, 0.37};
  const GraphPoint target = eval_f(*ch, eval_f_tilde(*ch, L0));

  auto inner = hold(g, beta, eval_f_tilde(*ch, L0));
  auto t = transfer_strategy(ch, std::move(inner), beta, 2.0, L0);
  auto evader = hold(g, beta, GraphPoint{0, 0.9});
  const GameRecord rec =
      run_game(g, *t, *evader, L0, GraphPoint{0, 0.9}, beta, 2.0);

  CHECK(rec.pursuer.back() == target);
  CHECK(rec.pursuer.position(rec.steps - 1) == target);
  CHECK(rec.pursuer.position(rec.steps - 2) == target);
}

TEST_CASE("transferred greedy trails direct greedy by at most four steps") {
  auto g = interval();
  auto ch = std::make_shared<Chaining>(build_chaining(g, g, 0.01));
  const double beta = transfer_beta(*ch);
  const double T = 2.0;
  const GraphPoint L0{0, 0.0};

  for (const GraphPoint M0 : {GraphPoint{0, 0.7}, GraphPoint{0, 1.0}}) {
    for (int kind = 0; kind < 2; ++kind) {
      auto make_ev = [&]() -> std::unique_ptr<Strategy> {
        if (kind == 0) return make_evader(g, beta, EvaderKind::flee);
        return hold(g, beta, M0);
      };
      auto direct = greedy_pursuer(g, beta);
      auto ev1 = make_ev();
      const GameRecord base = run_game(g, *direct, *ev1, L0, M0, beta, T);

      auto t = transfer_strategy(ch, greedy_pursuer(g, beta), beta, T, L0);
      auto ev2 = make_ev();
      const GameRecord moved = run_game(g, *t, *ev2, L0, M0, beta, T);

      CHECK(moved.min_distance <= base.min_distance + 4.0 * beta + 1e-9);
    }
  }
}

TEST_CASE("inner strategy protocol violations are caught and attributed") {
  auto g = interval();
  auto ch = std::make_shared<Chaining>(build_chaining(g, g, 0.01));
  const double beta = transfer_beta(*ch);
  auto bad = std::make_unique<Teleporter>(g, beta, GraphPoint{0, 1.0});
  auto t = transfer_strategy(ch, std::move(bad), beta, 1.0, GraphPoint{0, 0.0});

  const std::vector<GraphPoint> pre1{{0, 0.9}};
  const GraphPoint own1 = t->next(GraphPoint{0, 0.0}, pre1);
  const std::vector<GraphPoint> pre2{{0, 0.9}, {0, 0.9}};
  CHECK_THROWS_WITH_AS(t->next(own1, pre2), doctest::Contains("inner"),
                       ProtocolError);
}

TEST_CASE("sampled distortion of an identity chaining stays within the nets") {
  auto g = theta();
  auto ch = std::make_shared<Chaining>(build_chaining(g, g, 0.05));
  const MeasuredDistortion m = measure_chaining_distortion(*ch, 150);
  CHECK(m.dis_f >= 0.0);
  CHECK(m.dis_f <= 2.0 * ch->param() + 1e-9);
  CHECK(m.dis_f_tilde <= 2.0 * ch->param() + 1e-9);
}

TEST_CASE("certification audits the per-step proof inequalities") {
  const double eps = 1e-4;
  const AlignedPair pair = perturbed_interval_chaining(eps, 0.005);
  const double beta = transfer_beta(*pair.ch);
  REQUIRE(beta == doctest::Approx(0.01));
  const double alpha = 0.2, T = 1.0;

  const InnerFactory inner = [&](const GraphPoint&) {
    return greedy_pursuer(pair.b, beta);
  };
  std::vector<StrategyFactory> suite{
      [&](const GraphPoint&, const GraphPoint&) {
        return make_evader(pair.a, beta, EvaderKind::flee);
      },
      [&](const GraphPoint&, const GraphPoint& M0) {
        return hold(pair.a, beta, M0);
      },
  };
  const std::vector<GraphPoint> L0s{pair.a->vertex_point(0)};
  const std::vector<GraphPoint> M0s{{0, 0.6}};

  const TransferReport rep =
      certify_transfer_bound(pair.ch, inner, alpha, T, suite, L0s, M0s);

  CHECK(rep.bound == doctest::Approx(alpha + 28.0 * beta));
  CHECK(rep.games.size() == 2);
  for (const TransferGameReport& g : rep.games) {
    CHECK_FALSE(g.violated);
    CHECK_FALSE(g.chain_violated);
    CHECK(g.worst_shadow_gap_excess <= 1e-7);
    CHECK(g.worst_real_gap_excess <= 1e-7);
    CHECK(g.min_distance <= rep.bound + 1e-9);
    CHECK(g.shadow_gaps.size() == g.real_gaps.size());
    CHECK(g.shadow_gaps.size() >= 2);
  }
  CHECK_FALSE(rep.violated);
  CHECK(rep.worst_min_distance <= rep.bound);

  const std::string js = rep.to_json();
  const auto parsed = nlohmann::json::parse(js);
  CHECK(parsed["games"].size() == 2);
  CHECK(parsed["bound"].get<double>() == doctest::Approx(rep.bound));
}

TEST_CASE("a dishonest chaining is flagged, not hidden") {
  // Same nets on both sides of a circle, but paired through a scramble
  // that is no isometry, with a budget claiming they are close.
  auto c = std::make_shared<MetricGraph>(
      2, std::vector<Edge>{{0, 1, 0.5}, {0, 1, 0.5}});
  std::vector<GraphPoint> pts;
  for (int e = 0; e < 2; ++e) {
    for (int j = 0; j < 10; ++j) {
      pts.push_back(c->canonical(GraphPoint{e, j * 0.05}));
    }
  }
  // Drop duplicates introduced by canonicalization of shared vertices.
  std::vector<GraphPoint> net;
  for (const GraphPoint& p : pts) {
    bool seen = false;
    for (const GraphPoint& q : net) seen = seen || q == p;
    if (!seen) net.push_back(p);
  }
  const int n = static_cast<int>(net.size());
  std::vector<int> scramble(n);
  for (int i = 0; i < n; ++i) scramble[i] = (i * 7 + 3) % n;
  const double dis = pairing_distortion(Net(c, net), Net(c, net), scramble);
  REQUIRE(dis > 0.2);  // genuinely bad pairing

  const double fake_budget = 1e-4;
  const Chaining bad(Net(c, net), Net(c, net), scramble,
                     std::max(2.0 * dis, 0.2), fake_budget, true);
  auto ch = std::make_shared<Chaining>(bad);

  const double beta = transfer_beta(*ch);
  const double alpha = 0.05, T = 1.0;
  const InnerFactory inner = [&](const GraphPoint&) {
    return greedy_pursuer(c, beta);
  };
  std::vector<StrategyFactory> suite{[&](const GraphPoint&, const GraphPoint&) {
    return make_evader(c, beta, EvaderKind::flee);
  }};
  const std::vector<GraphPoint> L0s{c->vertex_point(0)};
  const std::vector<GraphPoint> M0s{c->canonical(GraphPoint{0, 0.5})};

  const TransferReport rep =
      certify_transfer_bound(ch, inner, alpha, T, suite, L0s, M0s);
  CHECK(rep.violated);
  CHECK(rep.worst_min_distance > rep.bound);
}

TEST_CASE("the transferred strategy is stepwise in the evader prefix") {
  auto g = theta();
  auto ch = std::make_shared<Chaining>(build_chaining(g, g, 0.04));
  const double beta = transfer_beta(*ch);
  std::mt19937_64 rng(991);

  auto random_point = [&]() {
    std::uniform_int_distribution<int> pe(0, g->edge_count() - 1);
    const int e = pe(rng);
    std::uniform_real_distribution<double> po(0.0, g->edge(e).length);
    return g->canonical(GraphPoint{e, po(rng)});
  };
  auto random_step_from = [&](const GraphPoint& p) {
    auto cands = forward_moves(*g, p, beta * 0.9);
    cands.push_back(p);
    std::uniform_int_distribution<std::size_t> pick(0, cands.size() - 1);
    return cands[pick(rng)];
  };

  for (int trial = 0; trial < 5; ++trial) {
    const int len = 9;
    std::uniform_int_distribution<int> pick_n(1, len - 3);
    const int n = pick_n(rng);
    std::vector<GraphPoint> oppA{random_point()};
    for (int i = 1; i < len; ++i) oppA.push_back(random_step_from(oppA.back()));
    std::vector<GraphPoint> oppB = oppA;
    for (int i = n + 1; i < len; ++i) oppB[i] = random_step_from(oppB[i - 1]);

    const GraphPoint L0 = random_point();
    auto ta = transfer_strategy(ch, greedy_pursuer(g, beta), beta, 3.0, L0);
    auto tb = transfer_strategy(ch, greedy_pursuer(g, beta), beta, 3.0, L0);
    GraphPoint ownA = L0, ownB = L0;
    for (int i = 0; i <= n; ++i) {
      const std::span<const GraphPoint> prefA(oppA.data(), i + 1);
      const std::span<const GraphPoint> prefB(oppB.data(), i + 1);
      ownA = ta->next(ownA, prefA);
      ownB = tb->next(ownB, prefB);
      CHECK(ownA == ownB);
    }
  }
}
