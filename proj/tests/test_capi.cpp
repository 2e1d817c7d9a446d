// Exercises the shared library strictly through its C surface; the only
// project header included is the public one.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "graphpursuit.h"

namespace {

struct GraphHandle {
  gp_graph* g = nullptr;
  ~GraphHandle() { gp_graph_free(g); }
};

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  gp_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("graphs build from expressions and answer metric queries") {
  GraphHandle h;
  REQUIRE(gp_graph_generate("circle(1)", &h.g) == GP_OK);
  int vc = 0, ec = 0;
  CHECK(gp_graph_vertex_count(h.g, &vc) == GP_OK);
  CHECK(gp_graph_edge_count(h.g, &ec) == GP_OK);
  CHECK(vc == 2);
  CHECK(ec == 2);
  double len = 0.0;
  CHECK(gp_graph_total_edge_length(h.g, &len) == GP_OK);
  CHECK(len == doctest::Approx(1.0));

  double d = 0.0;
  CHECK(gp_graph_distance(h.g, 0, 0.0, 0, 0.5, &d) == GP_OK);
  CHECK(d == doctest::Approx(0.5));
  CHECK(gp_graph_distance(h.g, 0, 0.1, 1, 0.1, &d) == GP_OK);
  CHECK(d == doctest::Approx(0.2));

  CHECK(gp_graph_distance(h.g, 7, 0.0, 0, 0.0, &d) == GP_ERR_DOMAIN);

  char* js = nullptr;
  REQUIRE(gp_graph_to_json(h.g, &js) == GP_OK);
  const std::string text = take(js);
  gp_graph* back = nullptr;
  REQUIRE(gp_graph_from_json(text.c_str(), &back) == GP_OK);
  int vc2 = 0;
  CHECK(gp_graph_vertex_count(back, &vc2) == GP_OK);
  CHECK(vc2 == vc);
  gp_graph_free(back);
}

TEST_CASE("errors carry a status and a message") {
  gp_graph* g = nullptr;
  CHECK(gp_graph_generate("moebius(1)", &g) == GP_ERR_DOMAIN);
  CHECK(std::string(gp_last_error()).find("unknown generator kind") !=
        std::string::npos);
  CHECK(g == nullptr);

  CHECK(gp_graph_generate(nullptr, &g) == GP_ERR_INVALID_ARGUMENT);
  CHECK(gp_graph_generate("interval(1)", nullptr) ==
        GP_ERR_INVALID_ARGUMENT);
  CHECK(gp_graph_vertex_count(nullptr, nullptr) == GP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("pursuit steps move exactly beta or capture") {
  GraphHandle h;
  REQUIRE(gp_graph_generate("interval(1)", &h.g) == GP_OK);
  int e = -1;
  double o = -1.0;
  REQUIRE(gp_beta_pursuit_step(h.g, 0, 0.0, 0, 1.0, 0.25, &e, &o) == GP_OK);
  CHECK(e == 0);
  CHECK(o == doctest::Approx(0.25));
  REQUIRE(gp_beta_pursuit_step(h.g, 0, 0.9, 0, 1.0, 0.25, &e, &o) == GP_OK);
  CHECK(o == doctest::Approx(1.0));
  CHECK(gp_beta_pursuit_step(h.g, 0, 0.0, 0, 1.0, -0.1, &e, &o) ==
        GP_ERR_DOMAIN);
}

TEST_CASE("space-level distance bounds come through") {
  GraphHandle a, b;
  REQUIRE(gp_graph_generate("circle(1)", &a.g) == GP_OK);
  REQUIRE(gp_graph_generate("polygon(1,16)", &b.g) == GP_OK);
  double up = 0.0, lo = -1.0;
  REQUIRE(gp_gh_upper_bound(a.g, b.g, 0.0625, &up) == GP_OK);
  REQUIRE(gp_gh_diameter_lower_bound(a.g, b.g, &lo) == GP_OK);
  CHECK(lo == doctest::Approx(0.0));
  CHECK(up >= lo);
  CHECK(up <= 0.125 + 1e-9);  // isometric spaces: pure net slack
}

TEST_CASE("net and chaining serialization work through the C surface") {
  GraphHandle g;
  REQUIRE(gp_graph_generate("interval(1)", &g.g) == GP_OK);
  char* net_js = nullptr;
  REQUIRE(gp_net_json(g.g, 0.1, &net_js) == GP_OK);
  const auto net = nlohmann::json::parse(take(net_js));
  CHECK(net["radius"].get<double>() <= 0.1 + 1e-12);
  CHECK(net["size"].get<int>() == net["points"].size());

  GraphHandle same;
  REQUIRE(gp_graph_generate("interval(1)", &same.g) == GP_OK);
  char* ch_js = nullptr;
  REQUIRE(gp_chaining_build_json(g.g, same.g, 0.01, &ch_js) == GP_OK);
  CHECK(nlohmann::json::parse(take(ch_js)).is_object());

  // an interval and a much longer one cannot be chained at a tiny budget
  GraphHandle longer;
  REQUIRE(gp_graph_generate("interval(2)", &longer.g) == GP_OK);
  char* bad = nullptr;
  CHECK(gp_chaining_build_json(g.g, longer.g, 0.01, &bad) ==
        GP_ERR_CONSTRUCTION);
  CHECK(std::string(gp_last_error()).find("distortion") !=
        std::string::npos);
}

TEST_CASE("single games run from a config string") {
  gp_game* game = nullptr;
  REQUIRE(gp_game_run(
              R"js({"kind":"single-game","graph":"interval(1)",
                    "evaders":["flee"],"beta":0.1,"T":2})js",
              &game) == GP_OK);
  double min_d = 1.0;
  int steps = 0, argmin = -1;
  CHECK(gp_game_min_distance(game, &min_d) == GP_OK);
  CHECK(gp_game_steps(game, &steps) == GP_OK);
  CHECK(gp_game_argmin_step(game, &argmin) == GP_OK);
  CHECK(steps == 20);
  CHECK(min_d <= 0.1 + 1e-9);
  CHECK(argmin >= 0);
  char* csv = nullptr;
  REQUIRE(gp_game_to_csv(game, &csv) == GP_OK);
  const std::string text = take(csv);
  CHECK(text.substr(0, text.find('\n')) ==
        "step,time,pursuer_edge,pursuer_offset,evader_edge,evader_offset,"
        "distance");
  gp_game_free(game);

  gp_game* none = nullptr;
  CHECK(gp_game_run(R"js({"kind":"single-game","graph":"interval(1)"})js",
                    &none) == GP_ERR_DOMAIN);
}

TEST_CASE("experiments run end to end through the C surface") {
  gp_report* rep = nullptr;
  REQUIRE(gp_run_transfer_experiment(
              R"js({"kind":"transfer-bound","graph":"interval(1)",
                    "alpha":0.1,"T":2,"eps":[1e-4],
                    "evaders":["flee","stationary"]})js",
              &rep) == GP_OK);
  int failed = 1;
  CHECK(gp_report_failed(rep, &failed) == GP_OK);
  CHECK(failed == 0);
  char* js = nullptr;
  REQUIRE(gp_report_to_json(rep, &js) == GP_OK);
  const auto parsed = nlohmann::json::parse(take(js));
  CHECK(parsed["points"].size() == 1);
  char* csv = nullptr;
  REQUIRE(gp_report_csv(rep, &csv) == GP_OK);
  CHECK(take(csv).rfind("eps,beta,excess,bound,violated\n", 0) == 0);
  gp_report_free(rep);

  gp_report* refine = nullptr;
  REQUIRE(gp_run_refinement_experiment(
              R"js({"kind":"graph-refinement",
                    "levels":["polygon(1,4)","polygon(1,8)"],
                    "reference":"polygon(1,16)",
                    "evaders":["flee"],"beta":0.1,"T":1})js",
              &refine) == GP_OK);
  CHECK(gp_report_failed(refine, &failed) == GP_OK);
  CHECK(failed == 0);
  gp_report_free(refine);

  gp_report* control = nullptr;
  REQUIRE(gp_run_transfer_experiment(
              R"js({"kind":"transfer-bound","graph":"circle(1)",
                    "alpha":0.1,"T":1,"eps":[1e-6],"evaders":["flee"],
                    "negative_control":true,"seed":4})js",
              &control) == GP_OK);
  CHECK(gp_report_failed(control, &failed) == GP_OK);
  CHECK(failed == 1);
  gp_report_free(control);
}

TEST_CASE("version and error defaults are sane") {
  CHECK(std::string(gp_version()) == "0.1.0");
  CHECK(gp_last_error() != nullptr);
}
