#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphpursuit/experiments.hpp"
#include "graphpursuit/generators.hpp"
#include "graphpursuit/parallel.hpp"

using namespace gp;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("generators produce the advertised shapes") {
  const auto iv = make_interval(1.0);
  CHECK(iv->vertex_count() == 2);
  CHECK(iv->edge_count() == 1);
  CHECK(iv->edge(0).length == 1.0);

  const auto c = make_circle(1.0);
  CHECK(c->vertex_count() == 2);
  CHECK(c->edge_count() == 2);
  CHECK(c->edge(0).length == 0.5);
  CHECK(c->edge(1).length == 0.5);
  CHECK(c->distance(c->vertex_point(0), c->vertex_point(1)) ==
        doctest::Approx(0.5));

  const auto th = make_theta(1.0, 2.0, 3.0);
  CHECK(th->vertex_count() == 2);
  CHECK(th->edge_count() == 3);
  CHECK(th->total_edge_length() == doctest::Approx(6.0));

  const auto poly = make_polygon(1.0, 8);
  CHECK(poly->vertex_count() == 8);
  CHECK(poly->edge_count() == 8);
  CHECK(poly->distance(poly->vertex_point(0), poly->vertex_point(4)) ==
        doctest::Approx(0.5));
  CHECK(poly->distance(poly->vertex_point(0), poly->vertex_point(7)) ==
        doctest::Approx(0.125));
}

TEST_CASE("grid-disk clips the lattice to the disk and stays connected") {
  const auto g = make_grid_disk(1.0, 0.5);
  CHECK(g->vertex_count() == 13);  // lattice points with i^2+j^2 <= 4
  CHECK(g->edge_count() == 16);
  for (const Edge& e : g->edges()) CHECK(e.length == 0.5);
  // construction already threw if disconnected; spot-check a distance
  CHECK(g->vertex_distance(0, g->vertex_count() - 1) > 0.0);

  CHECK_THROWS_AS(make_grid_disk(0.3, 0.5), DomainError);
}

TEST_CASE("torus-grid wraps in both directions") {
  const auto t = make_torus_grid(3, 4, 0.25);
  CHECK(t->vertex_count() == 12);
  CHECK(t->edge_count() == 24);
  // one wrap step beats two forward steps
  const auto at = [&](int i, int j) { return t->vertex_point(i * 4 + j); };
  CHECK(t->distance(at(0, 0), at(2, 0)) == doctest::Approx(0.25));
  CHECK(t->distance(at(0, 0), at(0, 3)) == doctest::Approx(0.25));
  CHECK(t->distance(at(0, 0), at(1, 2)) == doctest::Approx(0.75));

  CHECK_THROWS_AS(make_torus_grid(1, 4, 0.25), DomainError);
}

TEST_CASE("random trees are deterministic per seed") {
  const auto a = make_random_tree(10, 7);
  CHECK(a->vertex_count() == 10);
  CHECK(a->edge_count() == 9);
  const auto b = make_random_tree(10, 7);
  CHECK(graph_to_json(*a) == graph_to_json(*b));
  const auto other = make_random_tree(10, 8);
  CHECK(graph_to_json(*a) != graph_to_json(*other));
}

TEST_CASE("generator expressions parse or fail loudly") {
  CHECK(generate("interval(2.5)")->total_edge_length() == doctest::Approx(2.5));
  CHECK(generate(" circle( 1.0 ) ")->edge_count() == 2);
  CHECK(generate("theta(1,2,3)")->edge_count() == 3);
  CHECK(generate("grid-disk(1,0.5)")->vertex_count() == 13);
  CHECK(generate("torus-grid(3,4,0.25)")->vertex_count() == 12);
  CHECK(generate("random-tree(6,1)")->vertex_count() == 6);
  CHECK(generate("polygon(1,16)")->edge_count() == 16);

  CHECK_THROWS_WITH_AS(generate("moebius(1)"),
                       doctest::Contains("unknown generator kind"),
                       DomainError);
  CHECK_THROWS_AS(generate("interval"), DomainError);
  CHECK_THROWS_AS(generate("interval()"), DomainError);
  CHECK_THROWS_AS(generate("interval(1,2)"), DomainError);
  CHECK_THROWS_AS(generate("interval(abc)"), DomainError);
  CHECK_THROWS_AS(generate("polygon(1,2.5)"), DomainError);
}

TEST_CASE("config parsing is strict about keys, types, and preconditions") {
  const std::string good = R"js({
    "kind": "transfer-bound",
    "graph": "interval(1)",
    "alpha": 0.1,
    "T": 2,
    "eps": [1e-4, 1e-6],
    "evaders": ["flee", "stationary"],
    "seed": 3
  })js";
  const ExperimentConfig cfg = ExperimentConfig::from_json(good);
  CHECK(cfg.kind == ExperimentKind::transfer_bound);
  CHECK(cfg.eps_list.size() == 2);
  CHECK(cfg.alpha == 0.1);
  CHECK(cfg.subdivisions == 4);  // default

  // scalar eps is promoted to a one-element list
  CHECK(ExperimentConfig::from_json(
            R"js({"graph":"interval(1)","eps":1e-4})js")
            .eps_list.size() == 1);

  CHECK_THROWS_WITH_AS(
      ExperimentConfig::from_json(R"js({"graph":"interval(1)","epz":1})js"),
      doctest::Contains("unknown config key"), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json("not json"), DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"js({"kind":"sideways"})js"),
                  DomainError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(R"js({"alpha":"high"})js"),
                  DomainError);

  // alpha out of range
  CHECK_THROWS_AS(
      ExperimentConfig::from_json(
          R"js({"graph":"interval(1)","eps":1e-4,"alpha":1.5})js"),
      DomainError);
  // eps at or above alpha^2
  CHECK_THROWS_WITH_AS(
      ExperimentConfig::from_json(
          R"js({"graph":"interval(1)","eps":0.02,"alpha":0.1})js"),
      doctest::Contains("alpha^2"), DomainError);
  // scripted evaders cannot appear in suites
  CHECK_THROWS_AS(ExperimentConfig::from_json(
                      R"js({"graph":"interval(1)","eps":1e-4,
                          "evaders":["scripted"]})js"),
                  DomainError);
  // refinement needs levels and a reference
  CHECK_THROWS_AS(
      ExperimentConfig::from_json(
          R"js({"kind":"graph-refinement","levels":["polygon(1,4)"],
                "reference":"polygon(1,8)"})js"),
      DomainError);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json(
          R"js({"kind":"graph-refinement",
                "levels":["polygon(1,4)","polygon(1,8)"]})js"),
      DomainError);
}

TEST_CASE("suite members bind to the start pair") {
  const auto g = make_interval(1.0);
  const double beta = 0.1;
  const GraphPoint L0{0, 0.0}, M0{0, 0.8};

  auto stationary = suite_member(g, beta, "stationary", 0)(L0, M0);
  const std::vector<GraphPoint> pre{L0};
  CHECK(stationary->next(M0, pre) == g->canonical(M0));

  auto flee = suite_member(g, beta, "flee", 0)(L0, M0);
  const GraphPoint moved = flee->next(M0, pre);
  CHECK(g->distance(moved, M0) <= beta + kMetricTol);

  CHECK_THROWS_AS(suite_member(g, beta, "scripted", 0), DomainError);
  CHECK_THROWS_AS(suite_member(g, beta, "zigzag", 0), DomainError);
}

TEST_CASE("parallel_for covers every index and honors the env budget") {
  setenv("GRAPHPURSUIT_THREADS", "3", 1);
  CHECK(thread_budget() == 3);

  std::vector<int> out(100, 0);
  std::atomic<int> calls{0};
  parallel_for(100, [&](int i) {
    out[i] = i * i;
    calls.fetch_add(1);
  });
  CHECK(calls.load() == 100);
  for (int i = 0; i < 100; ++i) CHECK(out[i] == i * i);

  CHECK_THROWS_AS(parallel_for(8,
                               [](int i) {
                                 if (i == 5) throw DomainError("boom");
                               }),
                  DomainError);

  unsetenv("GRAPHPURSUIT_THREADS");
  CHECK(thread_budget() >= 1);
}

TEST_CASE("transfer experiment sweeps eps and writes reproducible reports") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "gp_harness_transfer";
  std::filesystem::remove_all(dir);

  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::transfer_bound;
  cfg.graph = "interval(1)";
  cfg.alpha = 0.1;
  cfg.T = 2.0;
  cfg.eps_list = {0.0, 1e-4, 1e-6};
  cfg.evaders = {"flee", "stationary"};
  cfg.seed = 11;
  cfg.out_dir = dir.string();

  const TransferExperimentReport rep = run_transfer_experiment(cfg);
  CHECK_FALSE(rep.failed);
  REQUIRE(rep.points.size() == 3);

  const TransferSweepPoint& identity = rep.points[0];
  CHECK(identity.eps == 0.0);
  CHECK_FALSE(identity.has_report);
  CHECK(identity.inner_certified);
  CHECK(identity.excess <= identity.beta + 1e-9);

  const TransferSweepPoint& mid = rep.points[1];
  CHECK(mid.has_report);
  CHECK(mid.beta == doctest::Approx(0.01));
  CHECK(mid.bound == doctest::Approx(0.1 + 48.0 * 0.01));
  CHECK(mid.inner_certified);
  CHECK_FALSE(mid.violated);
  CHECK(mid.worst_min_distance <= mid.bound);
  for (const TransferGameReport& g : mid.report.games) {
    CHECK(g.worst_shadow_gap_excess <= 1e-7);
    CHECK(g.worst_real_gap_excess <= 1e-7);
  }

  const TransferSweepPoint& fine = rep.points[2];
  CHECK(fine.beta == doctest::Approx(0.001));
  CHECK_FALSE(fine.violated);

  const std::string report_text = slurp(dir / "transfer_report.json");
  const auto parsed = nlohmann::json::parse(report_text);
  CHECK(parsed["points"].size() == 3);
  const std::string plot = slurp(dir / "transfer_plot.csv");
  CHECK(plot.substr(0, plot.find('\n')) == "eps,beta,excess,bound,violated");
  CHECK(std::count(plot.begin(), plot.end(), '\n') == 4);

  // identical config, no writing: byte-identical report
  ExperimentConfig again = cfg;
  again.out_dir.clear();
  CHECK(run_transfer_experiment(again).to_json() == rep.to_json());

  std::filesystem::remove_all(dir);
}

TEST_CASE("a scrambled pairing fails the sweep as designed") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::transfer_bound;
  cfg.graph = "circle(1)";
  cfg.alpha = 0.1;
  cfg.T = 1.0;
  cfg.eps_list = {1e-6};
  cfg.evaders = {"flee"};
  cfg.negative_control = true;
  cfg.seed = 4;

  const TransferExperimentReport rep = run_transfer_experiment(cfg);
  CHECK(rep.failed);
  REQUIRE(rep.points.size() == 1);
  CHECK(rep.points[0].violated);
  CHECK(rep.points[0].worst_min_distance > rep.points[0].bound);
}

TEST_CASE("polygon refinement closes in on the circle") {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "gp_harness_refine";
  std::filesystem::remove_all(dir);

  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::graph_refinement;
  cfg.levels = {"polygon(1,4)", "polygon(1,8)", "polygon(1,16)",
                "polygon(1,32)"};
  cfg.reference = "polygon(1,64)";
  cfg.evaders = {"flee"};
  cfg.beta = 0.1;
  cfg.T = 2.0;
  cfg.out_dir = dir.string();

  const RefinementReport rep = run_refinement_experiment(cfg);
  CHECK_FALSE(rep.failed);
  CHECK(rep.monotone_alpha);
  CHECK(rep.monotone_gh);
  REQUIRE(rep.levels.size() == 4);
  for (const RefinementLevel& lv : rep.levels) {
    CHECK_FALSE(lv.failed);
    CHECK(std::abs(lv.alpha_n - 0.5) <= 2.0 * lv.feature);
  }
  for (std::size_t i = 1; i < rep.levels.size(); ++i) {
    CHECK(rep.levels[i].gh_bound < rep.levels[i - 1].gh_bound);
  }

  const std::string table = slurp(dir / "refine_table.csv");
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
  CHECK(table.substr(0, table.find('\n')) ==
        "level,graph,min_edge,gh_bound,alpha");

  std::filesystem::remove_all(dir);
}

TEST_CASE("a broken refinement level is recorded, not fatal") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::graph_refinement;
  cfg.levels = {"polygon(1,4)", "polygon(1,1)", "polygon(1,16)"};
  cfg.reference = "polygon(1,32)";
  cfg.evaders = {"flee"};
  cfg.beta = 0.1;
  cfg.T = 1.0;

  const RefinementReport rep = run_refinement_experiment(cfg);
  CHECK(rep.failed);
  REQUIRE(rep.levels.size() == 3);
  CHECK_FALSE(rep.levels[0].failed);
  CHECK(rep.levels[1].failed);
  CHECK(rep.levels[1].error.find("segments") != std::string::npos);
  CHECK_FALSE(rep.levels[2].failed);
  CHECK(rep.levels[2].alpha_n > 0.0);
}

TEST_CASE("gh sweep bounds isometric descriptions near zero") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::gh_sweep;
  cfg.graph = "circle(1)";
  cfg.levels = {"polygon(1,8)", "circle(1)"};
  cfg.beta = 0.0625;  // net radius

  const GhSweepReport rep = run_gh_sweep(cfg);
  REQUIRE(rep.rows.size() == 2);
  for (const GhSweepRow& r : rep.rows) {
    CHECK_FALSE(r.failed);
    // isometric spaces: the bound is pure net slack
    CHECK(r.bound <= 2.0 * 0.0625 + 1e-9);
  }
}

TEST_CASE("single game runs greedy against the named evader") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::single_game;
  cfg.graph = "interval(1)";
  cfg.evaders = {"flee"};
  cfg.beta = 0.1;
  cfg.T = 2.0;

  const GameRecord rec = run_single_game(cfg);
  rec.validate();
  CHECK(rec.steps == 20);
  CHECK(rec.evader.position(0) ==
        rec.graph->canonical(GraphPoint{0, 1.0}));
  CHECK(rec.min_distance <= 0.1 + 1e-9);
}
