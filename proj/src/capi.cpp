#include "graphpursuit.h"

#include <cstring>
#include <memory>
#include <string>
#include <utility>

#include <json.hpp>

#include "graphpursuit/chaining.hpp"
#include "graphpursuit/experiments.hpp"
#include "graphpursuit/generators.hpp"
#include "graphpursuit/gh.hpp"
#include "graphpursuit/nets.hpp"
#include "graphpursuit/pursuit.hpp"

struct gp_graph {
  std::shared_ptr<const gp::MetricGraph> g;
};

struct gp_game {
  gp::GameRecord rec;
};

struct gp_report {
  std::string json;
  std::string csv;
  bool failed = false;
};

namespace {

thread_local std::string t_last_error = "no error";

gp_status fail(gp_status s, const char* what) {
  t_last_error = what;
  return s;
}

template <typename F>
gp_status guard(F&& f) {
  try {
    f();
    return GP_OK;
  } catch (const gp::ChainingError& e) {
    return fail(GP_ERR_CONSTRUCTION, e.what());
  } catch (const gp::ProtocolError& e) {
    return fail(GP_ERR_PROTOCOL, e.what());
  } catch (const gp::IoError& e) {
    return fail(GP_ERR_IO, e.what());
  } catch (const gp::DomainError& e) {
    return fail(GP_ERR_DOMAIN, e.what());
  } catch (const std::exception& e) {
    return fail(GP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GP_ERR_INTERNAL, "unknown error");
  }
}

gp_status need_args(bool ok) {
  if (ok) return GP_OK;
  return fail(GP_ERR_INVALID_ARGUMENT, "null handle or out pointer");
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* gp_last_error(void) { return t_last_error.c_str(); }

const char* gp_version(void) { return "0.1.0"; }

void gp_string_free(char* s) { delete[] s; }

gp_status gp_graph_generate(const char* expr, gp_graph** out) {
  if (need_args(expr && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] { *out = new gp_graph{gp::generate(expr)}; });
}

gp_status gp_graph_from_json(const char* text, gp_graph** out) {
  if (need_args(text && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] {
    *out = new gp_graph{
        std::make_shared<gp::MetricGraph>(gp::graph_from_json(text))};
  });
}

gp_status gp_graph_to_json(const gp_graph* g, char** out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] { *out = copy_string(gp::graph_to_json(*g->g)); });
}

gp_status gp_graph_vertex_count(const gp_graph* g, int* out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  *out = g->g->vertex_count();
  return GP_OK;
}

gp_status gp_graph_edge_count(const gp_graph* g, int* out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  *out = g->g->edge_count();
  return GP_OK;
}

gp_status gp_graph_total_edge_length(const gp_graph* g, double* out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  *out = g->g->total_edge_length();
  return GP_OK;
}

gp_status gp_graph_distance(const gp_graph* g, int edge_p, double offset_p,
                            int edge_q, double offset_q, double* out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] {
    const gp::GraphPoint p{edge_p, offset_p};
    const gp::GraphPoint q{edge_q, offset_q};
    g->g->validate_point(p);
    g->g->validate_point(q);
    *out = g->g->distance(p, q);
  });
}

void gp_graph_free(gp_graph* g) { delete g; }

gp_status gp_beta_pursuit_step(const gp_graph* g, int edge_l, double offset_l,
                               int edge_t, double offset_t, double beta,
                               int* out_edge, double* out_offset) {
  if (need_args(g && out_edge && out_offset) != GP_OK)
    return GP_ERR_INVALID_ARGUMENT;
  return guard([&] {
    const gp::GraphPoint moved = gp::beta_pursuit_step(
        *g->g, gp::GraphPoint{edge_l, offset_l},
        gp::GraphPoint{edge_t, offset_t}, beta);
    *out_edge = moved.edge;
    *out_offset = moved.offset;
  });
}

gp_status gp_gh_upper_bound(const gp_graph* a, const gp_graph* b,
                            double net_radius, double* out) {
  if (need_args(a && b && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] { *out = gp::gh_upper_bound(a->g, b->g, net_radius); });
}

gp_status gp_gh_diameter_lower_bound(const gp_graph* a, const gp_graph* b,
                                     double* out) {
  if (need_args(a && b && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] { *out = gp::gh_diameter_lower_bound(*a->g, *b->g); });
}

gp_status gp_net_json(const gp_graph* g, double eps, char** out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] {
    const gp::Net net = gp::build_eps_net(g->g, eps);
    nlohmann::json j;
    j["eps"] = eps;
    j["radius"] = net.radius();
    j["size"] = net.size();
    nlohmann::json pts = nlohmann::json::array();
    for (const gp::GraphPoint& p : net.points()) {
      pts.push_back({{"edge", p.edge}, {"offset", p.offset}});
    }
    j["points"] = std::move(pts);
    *out = copy_string(j.dump(2));
  });
}

gp_status gp_chaining_build_json(const gp_graph* a, const gp_graph* b,
                                 double eps, char** out) {
  if (need_args(a && b && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] {
    const gp::Chaining ch = gp::build_chaining(a->g, b->g, eps);
    *out = copy_string(gp::chaining_to_json(ch));
  });
}

gp_status gp_game_run(const char* config_json, gp_game** out) {
  if (need_args(config_json && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] {
    const gp::ExperimentConfig cfg =
        gp::ExperimentConfig::from_json(config_json);
    *out = new gp_game{gp::run_single_game(cfg)};
  });
}

gp_status gp_game_min_distance(const gp_game* g, double* out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  *out = g->rec.min_distance;
  return GP_OK;
}

gp_status gp_game_argmin_step(const gp_game* g, int* out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  *out = g->rec.argmin_step;
  return GP_OK;
}

gp_status gp_game_steps(const gp_game* g, int* out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  *out = g->rec.steps;
  return GP_OK;
}

gp_status gp_game_to_csv(const gp_game* g, char** out) {
  if (need_args(g && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] { *out = copy_string(g->rec.to_csv()); });
}

void gp_game_free(gp_game* g) { delete g; }

gp_status gp_run_transfer_experiment(const char* config_json,
                                     gp_report** out) {
  if (need_args(config_json && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] {
    const gp::ExperimentConfig cfg =
        gp::ExperimentConfig::from_json(config_json);
    const gp::TransferExperimentReport rep = gp::run_transfer_experiment(cfg);
    *out = new gp_report{rep.to_json(), rep.plot_csv(), rep.failed};
  });
}

gp_status gp_run_refinement_experiment(const char* config_json,
                                       gp_report** out) {
  if (need_args(config_json && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] {
    const gp::ExperimentConfig cfg =
        gp::ExperimentConfig::from_json(config_json);
    const gp::RefinementReport rep = gp::run_refinement_experiment(cfg);
    *out = new gp_report{rep.to_json(), rep.table_csv(), rep.failed};
  });
}

gp_status gp_run_gh_sweep(const char* config_json, gp_report** out) {
  if (need_args(config_json && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] {
    const gp::ExperimentConfig cfg =
        gp::ExperimentConfig::from_json(config_json);
    const gp::GhSweepReport rep = gp::run_gh_sweep(cfg);
    bool failed = false;
    for (const gp::GhSweepRow& r : rep.rows) failed = failed || r.failed;
    *out = new gp_report{rep.to_json(), "", failed};
  });
}

gp_status gp_report_to_json(const gp_report* r, char** out) {
  if (need_args(r && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] { *out = copy_string(r->json); });
}

gp_status gp_report_csv(const gp_report* r, char** out) {
  if (need_args(r && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  return guard([&] { *out = copy_string(r->csv); });
}

gp_status gp_report_failed(const gp_report* r, int* out) {
  if (need_args(r && out) != GP_OK) return GP_ERR_INVALID_ARGUMENT;
  *out = r->failed ? 1 : 0;
  return GP_OK;
}

void gp_report_free(gp_report* r) { delete r; }

}  // extern "C"
