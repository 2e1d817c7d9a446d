#include "graphpursuit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "graphpursuit/generators.hpp"
#include "graphpursuit/gh.hpp"
#include "graphpursuit/parallel.hpp"

namespace gp {

namespace {

using nlohmann::json;
using GraphPtr = std::shared_ptr<const MetricGraph>;

ExperimentKind parse_kind(const std::string& s) {
  if (s == "transfer-bound") return ExperimentKind::transfer_bound;
  if (s == "graph-refinement") return ExperimentKind::graph_refinement;
  if (s == "gh-sweep") return ExperimentKind::gh_sweep;
  if (s == "single-game") return ExperimentKind::single_game;
  throw DomainError("unknown experiment kind '" + s +
                    "'; expected transfer-bound, graph-refinement, gh-sweep, "
                    "or single-game");
}

void need(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
}

void write_outputs(const ExperimentConfig& cfg, const std::string& report_name,
                   const std::string& report, const std::string& csv_name,
                   const std::string& csv) {
  if (cfg.out_dir.empty()) return;
  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  write_text(dir / report_name, report);
  if (!csv_name.empty()) write_text(dir / csv_name, csv);
}

GraphPoint farthest_from(const MetricGraph& g, const GraphPoint& p) {
  const std::vector<GraphPoint> pts =
      sample_points(g, g.total_edge_length() / 64.0, 256);
  GraphPoint best = pts.front();
  double best_d = -1.0;
  for (const GraphPoint& q : pts) {
    const double d = g.distance(p, q);
    if (d > best_d + 1e-15) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

std::vector<std::string> suite_names(const ExperimentConfig& cfg,
                                     std::initializer_list<const char*> def) {
  if (!cfg.evaders.empty()) return cfg.evaders;
  return {def.begin(), def.end()};
}

std::vector<StrategyFactory> build_suite(const GraphPtr& g, double beta,
                                         const std::vector<std::string>& names,
                                         unsigned long long seed) {
  std::vector<StrategyFactory> out;
  out.reserve(names.size());
  for (const std::string& n : names) out.push_back(suite_member(g, beta, n, seed));
  return out;
}

/// The base graph with every edge cut into equal pieces whose lengths are
/// then independently nudged; total length moves by at most eps, so the
/// copy stays within eps of the base. Keeps the piece <-> base-edge
/// correspondence so points can be mapped proportionally.
struct PerturbedCopy {
  GraphPtr base;
  GraphPtr graph;
  std::vector<std::vector<int>> piece_edge;  // per base edge, copy edge ids
  std::vector<double> piece_len;             // per base edge, unperturbed

  GraphPoint map_point(const GraphPoint& bp) const {
    const GraphPoint p = base->canonical(bp);
    const std::vector<int>& ids = piece_edge[p.edge];
    const double piece = piece_len[p.edge];
    int i = static_cast<int>(std::floor(p.offset / piece));
    i = std::clamp(i, 0, static_cast<int>(ids.size()) - 1);
    const double t = std::clamp((p.offset - i * piece) / piece, 0.0, 1.0);
    const double len = graph->edge(ids[i]).length;
    return graph->canonical(GraphPoint{ids[i], t * len});
  }
};

PerturbedCopy make_perturbed_copy(const GraphPtr& base, int pieces, double eps,
                                  unsigned long long seed) {
  const int ec = base->edge_count();
  const double mag = eps / (static_cast<double>(ec) * pieces);
  need(mag < base->min_edge_length() / (2.0 * pieces),
       "perturbation magnitude would not keep edge lengths positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> delta(-mag, mag);

  PerturbedCopy out;
  out.base = base;
  out.piece_edge.resize(ec);
  out.piece_len.resize(ec);
  int nv = base->vertex_count();
  std::vector<Edge> edges;
  for (int e = 0; e < ec; ++e) {
    const Edge& be = base->edge(e);
    out.piece_len[e] = be.length / pieces;
    int prev = be.u;
    for (int i = 0; i < pieces; ++i) {
      const int next = (i + 1 == pieces) ? be.v : nv++;
      out.piece_edge[e].push_back(static_cast<int>(edges.size()));
      edges.push_back({prev, next, out.piece_len[e] + delta(rng)});
      prev = next;
    }
  }
  out.graph = std::make_shared<MetricGraph>(nv, std::move(edges));
  return out;
}

TransferSweepPoint sweep_point(const ExperimentConfig& cfg,
                               const GraphPtr& base, double eps, int idx) {
  TransferSweepPoint pt;
  pt.eps = eps;
  const std::vector<std::string> names =
      suite_names(cfg, {"flee", "stationary", "random-walk"});

  if (eps == 0.0) {
    // The copy equals the base: run the inner pursuer directly; its
    // excess over alpha must stay within one grid step.
    const double beta = cfg.beta_override > 0.0 ? cfg.beta_override : 0.05;
    pt.beta = beta;
    const std::vector<StrategyFactory> suite =
        build_suite(base, beta, names, cfg.seed);
    const StrategyFactory pursuer = [base, beta](const GraphPoint&,
                                                 const GraphPoint&) {
      return greedy_pursuer(base, beta);
    };
    const std::vector<GraphPoint> L0s{base->vertex_point(0)};
    const std::vector<GraphPoint> M0s{farthest_from(*base, L0s[0])};
    const double est =
        capture_radius_estimate(base, pursuer, suite, L0s, M0s, beta, cfg.T);
    pt.inner_value = est;
    pt.inner_certified = est <= cfg.alpha + kMetricTol;
    pt.bound = cfg.alpha;
    pt.worst_min_distance = est;
    pt.excess = est - cfg.alpha;
    pt.violated = pt.excess > beta + 1e-9;
    return pt;
  }

  const double beta =
      cfg.beta_override > 0.0 ? cfg.beta_override : std::sqrt(eps);
  pt.beta = beta;
  const unsigned long long seed =
      cfg.seed + 0x9e3779b97f4a7c15ULL * static_cast<unsigned long long>(idx + 1);
  const PerturbedCopy copy =
      make_perturbed_copy(base, cfg.subdivisions, eps, seed);

  // Nets at half a step, laid down at matching positions on both sides.
  std::vector<GraphPoint> base_pts = sample_points(*base, beta / 2.0);
  std::vector<GraphPoint> copy_pts;
  copy_pts.reserve(base_pts.size());
  for (const GraphPoint& p : base_pts) copy_pts.push_back(copy.map_point(p));

  std::shared_ptr<const Chaining> ch;
  if (cfg.negative_control) {
    // Keep the nets but scramble who is paired with whom, while still
    // claiming the spaces are eps apart. The certification must notice.
    Net na(copy.graph, std::move(copy_pts));
    Net nb(base, std::move(base_pts));
    std::vector<int> perm(static_cast<std::size_t>(nb.size()));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed ^ 0xdecafULL);
    std::shuffle(perm.begin(), perm.end(), rng);
    const double dis = pairing_distortion(nb, na, perm);
    const double param =
        std::max({2.0 * dis, na.radius(), nb.radius()}) + 1e-12;
    ch = std::make_shared<Chaining>(std::move(na), std::move(nb),
                                    std::move(perm), param, eps, true);
  } else {
    ch = std::make_shared<Chaining>(make_chaining(
        copy.graph, base, std::move(copy_pts), std::move(base_pts), eps));
  }

  const GraphPoint L0 = copy.graph->vertex_point(0);
  const GraphPoint M0 = farthest_from(*copy.graph, L0);

  // The transferred bound only means something if the inner pursuer
  // actually achieves alpha on the base side; certify that first.
  {
    const std::vector<StrategyFactory> suite_b =
        build_suite(base, beta, names, cfg.seed);
    const StrategyFactory greedy_b = [base, beta](const GraphPoint&,
                                                  const GraphPoint&) {
      return greedy_pursuer(base, beta);
    };
    const std::vector<GraphPoint> L0s{eval_f_tilde(*ch, L0)};
    const std::vector<GraphPoint> M0s{eval_f_tilde(*ch, M0)};
    pt.inner_value = capture_radius_estimate(base, greedy_b, suite_b, L0s,
                                             M0s, beta, cfg.T);
    pt.inner_certified = pt.inner_value <= cfg.alpha + kMetricTol;
  }

  const std::vector<StrategyFactory> suite_a =
      build_suite(copy.graph, beta, names, cfg.seed);
  const InnerFactory inner = [base, beta](const GraphPoint&) {
    return greedy_pursuer(base, beta);
  };
  TransferCertifyOptions opts;
  if (cfg.beta_override > 0.0) {
    opts.beta = cfg.beta_override;
    opts.allow_beta_override = true;
  }
  const std::vector<GraphPoint> L0s{L0};
  const std::vector<GraphPoint> M0s{M0};
  pt.report = certify_transfer_bound(ch, inner, cfg.alpha, cfg.T, suite_a,
                                     L0s, M0s, opts);
  pt.has_report = true;
  pt.bound = pt.report.bound;
  pt.worst_min_distance = pt.report.worst_min_distance;
  pt.excess = pt.worst_min_distance - cfg.alpha;
  pt.violated = pt.report.violated;
  return pt;
}

/// A report about to be written must still be self-consistent; a failure
/// here is a library bug, not bad input.
void recheck(const TransferExperimentReport& rep) {
  for (const TransferSweepPoint& pt : rep.points) {
    if (!pt.has_report) continue;
    const TransferReport& r = pt.report;
    double worst = 0.0;
    bool violated = false;
    for (const TransferGameReport& g : r.games) {
      worst = std::max(worst, g.min_distance);
      violated = violated || g.violated;
    }
    const double want_bound =
        rep.alpha + (20.0 * rep.T + 8.0) * std::sqrt(r.eps);
    if (std::abs(worst - r.worst_min_distance) > 1e-12 ||
        violated != r.violated ||
        std::abs(r.bound - want_bound) > 1e-9 * std::max(1.0, want_bound)) {
      throw std::logic_error("transfer report failed re-validation");
    }
  }
}

}  // namespace

StrategyFactory suite_member(GraphPtr graph, double beta,
                             const std::string& name,
                             unsigned long long seed) {
  if (name == "stationary") {
    return [graph, beta](const GraphPoint&, const GraphPoint& M0) {
      EvaderParams p;
      p.script = {M0};
      return make_evader(graph, beta, EvaderKind::scripted, p);
    };
  }
  const EvaderKind kind = parse_evader_kind(name);
  if (kind == EvaderKind::scripted) {
    throw DomainError(
        "scripted evaders need a script and cannot be suite members; "
        "use stationary for hold-in-place");
  }
  return [graph, beta, kind, seed](const GraphPoint&, const GraphPoint&) {
    EvaderParams p;
    p.seed = seed;
    return make_evader(graph, beta, kind, p);
  };
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config must be a JSON object");

  static const std::set<std::string> allowed{
      "kind",       "graph",      "levels",        "reference",
      "alpha",      "T",          "eps",           "evaders",
      "subdivisions", "seed",     "beta",          "beta_override",
      "negative_control", "monotone_tol", "out_dir"};
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw DomainError("unknown config key '" + item.key() + "'");
    }
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("kind")) cfg.kind = parse_kind(j["kind"].get<std::string>());
    if (j.contains("graph")) cfg.graph = j["graph"].get<std::string>();
    if (j.contains("levels"))
      cfg.levels = j["levels"].get<std::vector<std::string>>();
    if (j.contains("reference"))
      cfg.reference = j["reference"].get<std::string>();
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("T")) cfg.T = j["T"].get<double>();
    if (j.contains("eps")) {
      if (j["eps"].is_array())
        cfg.eps_list = j["eps"].get<std::vector<double>>();
      else
        cfg.eps_list = {j["eps"].get<double>()};
    }
    if (j.contains("evaders"))
      cfg.evaders = j["evaders"].get<std::vector<std::string>>();
    if (j.contains("subdivisions"))
      cfg.subdivisions = j["subdivisions"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned long long>();
    if (j.contains("beta")) cfg.beta = j["beta"].get<double>();
    if (j.contains("beta_override"))
      cfg.beta_override = j["beta_override"].get<double>();
    if (j.contains("negative_control"))
      cfg.negative_control = j["negative_control"].get<bool>();
    if (j.contains("monotone_tol"))
      cfg.monotone_tol = j["monotone_tol"].get<double>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("config field has the wrong type: ") +
                      e.what());
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  for (const std::string& ev : evaders) {
    if (ev == "scripted") {
      throw DomainError(
          "scripted evaders need a script and cannot be named in config "
          "suites; use stationary for hold-in-place");
    }
    if (ev != "stationary") parse_evader_kind(ev);
  }
  need(T > 0.0, "T must be positive");
  need(beta >= 0.0, "beta must be nonnegative");
  need(beta_override >= 0.0, "beta_override must be nonnegative");
  need(monotone_tol >= 0.0, "monotone_tol must be nonnegative");
  switch (kind) {
    case ExperimentKind::transfer_bound:
      need(!graph.empty(), "transfer-bound experiments need a base graph");
      need(!eps_list.empty(),
           "transfer-bound experiments need at least one eps");
      need(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
      for (const double e : eps_list) {
        if (e == 0.0) {
          need(!negative_control,
               "the identity desk check (eps = 0) has no chaining to corrupt");
          continue;
        }
        need(e > 0.0 && e < alpha * alpha,
             "eps must lie in (0, alpha^2); the transfer bound is only "
             "proved there");
      }
      need(subdivisions >= 1, "subdivisions must be at least 1");
      break;
    case ExperimentKind::graph_refinement:
      need(levels.size() >= 2,
           "refinement experiments need at least two levels");
      need(!reference.empty(),
           "refinement experiments need a reference description");
      break;
    case ExperimentKind::gh_sweep:
      need(!graph.empty() && !levels.empty(),
           "gh sweeps need a base graph and at least one level");
      break;
    case ExperimentKind::single_game:
      need(!graph.empty(), "single games need a graph");
      need(!evaders.empty(), "single games need an evader");
      break;
  }
}

std::string TransferExperimentReport::to_json() const {
  json j;
  j["alpha"] = alpha;
  j["T"] = T;
  j["beta_overridden"] = beta_overridden;
  j["negative_control"] = negative_control;
  j["failed"] = failed;
  json pts = json::array();
  for (const TransferSweepPoint& pt : points) {
    json p;
    p["eps"] = pt.eps;
    p["beta"] = pt.beta;
    p["inner_value"] = pt.inner_value;
    p["inner_certified"] = pt.inner_certified;
    p["bound"] = pt.bound;
    p["worst_min_distance"] = pt.worst_min_distance;
    p["excess"] = pt.excess;
    p["violated"] = pt.violated;
    if (pt.has_report) p["report"] = json::parse(pt.report.to_json());
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  return j.dump(2);
}

std::string TransferExperimentReport::plot_csv() const {
  std::string out = "eps,beta,excess,bound,violated\n";
  for (const TransferSweepPoint& pt : points) {
    out += fmt(pt.eps) + "," + fmt(pt.beta) + "," + fmt(pt.excess) + "," +
           fmt(pt.bound) + "," + (pt.violated ? "1" : "0") + "\n";
  }
  return out;
}

TransferExperimentReport run_transfer_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  need(cfg.kind == ExperimentKind::transfer_bound,
       "config kind is not transfer-bound");
  const GraphPtr base = generate(cfg.graph);

  TransferExperimentReport rep;
  rep.alpha = cfg.alpha;
  rep.T = cfg.T;
  rep.beta_overridden = cfg.beta_override > 0.0;
  rep.negative_control = cfg.negative_control;
  rep.points.resize(cfg.eps_list.size());
  parallel_for(static_cast<int>(cfg.eps_list.size()), [&](int i) {
    rep.points[i] = sweep_point(cfg, base, cfg.eps_list[i], i);
  });
  for (const TransferSweepPoint& pt : rep.points) {
    rep.failed = rep.failed || pt.violated || !pt.inner_certified;
  }
  recheck(rep);
  write_outputs(cfg, "transfer_report.json", rep.to_json(),
                "transfer_plot.csv", rep.plot_csv());
  return rep;
}

std::string RefinementReport::to_json() const {
  json j;
  j["reference"] = reference;
  j["beta"] = beta;
  j["T"] = T;
  j["monotone_alpha"] = monotone_alpha;
  j["monotone_gh"] = monotone_gh;
  j["failed"] = failed;
  json ls = json::array();
  for (const RefinementLevel& lv : levels) {
    json l;
    l["graph"] = lv.graph_expr;
    l["index"] = lv.index;
    l["feature"] = lv.feature;
    l["gh_bound"] = lv.gh_bound;
    l["alpha"] = lv.alpha_n;
    l["failed"] = lv.failed;
    if (lv.failed) l["error"] = lv.error;
    ls.push_back(std::move(l));
  }
  j["levels"] = std::move(ls);
  return j.dump(2);
}

std::string RefinementReport::table_csv() const {
  std::string out = "level,graph,min_edge,gh_bound,alpha\n";
  for (const RefinementLevel& lv : levels) {
    if (lv.failed) continue;
    out += std::to_string(lv.index) + "," + lv.graph_expr + "," +
           fmt(lv.feature) + "," + fmt(lv.gh_bound) + "," + fmt(lv.alpha_n) +
           "\n";
  }
  return out;
}

RefinementReport run_refinement_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  need(cfg.kind == ExperimentKind::graph_refinement,
       "config kind is not graph-refinement");
  const GraphPtr ref = generate(cfg.reference);

  RefinementReport rep;
  rep.reference = cfg.reference;
  rep.T = cfg.T;
  rep.beta = cfg.beta > 0.0 ? cfg.beta : ref->diameter() / 10.0;
  rep.levels.resize(cfg.levels.size());
  const std::vector<std::string> names = suite_names(cfg, {"flee"});

  parallel_for(static_cast<int>(cfg.levels.size()), [&](int i) {
    RefinementLevel& lv = rep.levels[i];
    lv.graph_expr = cfg.levels[i];
    lv.index = i;
    try {
      const GraphPtr g = generate(lv.graph_expr);
      lv.feature = g->min_edge_length();
      lv.gh_bound = gh_upper_bound(g, ref, g->min_edge_length() / 2.0);
      const std::vector<StrategyFactory> suite =
          build_suite(g, rep.beta, names, cfg.seed);
      const StrategyFactory pursuer = [g, beta = rep.beta](const GraphPoint&,
                                                           const GraphPoint&) {
        return greedy_pursuer(g, beta);
      };
      const std::vector<GraphPoint> L0s{g->vertex_point(0)};
      const std::vector<GraphPoint> M0s{farthest_from(*g, L0s[0])};
      lv.alpha_n = capture_radius_estimate(g, pursuer, suite, L0s, M0s,
                                           rep.beta, cfg.T);
    } catch (const std::exception& e) {
      lv.failed = true;
      lv.error = e.what();
    }
  });

  rep.monotone_alpha = true;
  rep.monotone_gh = true;
  const RefinementLevel* prev = nullptr;
  for (const RefinementLevel& lv : rep.levels) {
    if (lv.failed) continue;
    if (prev) {
      const double tol =
          cfg.monotone_tol > 0.0 ? cfg.monotone_tol : 2.0 * prev->feature;
      if (lv.alpha_n > prev->alpha_n + tol) rep.monotone_alpha = false;
      if (lv.gh_bound > prev->gh_bound + 1e-12) rep.monotone_gh = false;
    }
    prev = &lv;
  }
  rep.failed = !rep.monotone_alpha;
  for (const RefinementLevel& lv : rep.levels) {
    rep.failed = rep.failed || lv.failed;
  }
  write_outputs(cfg, "refine_report.json", rep.to_json(), "refine_table.csv",
                rep.table_csv());
  return rep;
}

std::string GhSweepReport::to_json() const {
  json j;
  j["base"] = base;
  json rs = json::array();
  for (const GhSweepRow& r : rows) {
    json e;
    e["graph"] = r.graph_expr;
    e["bound"] = r.bound;
    e["failed"] = r.failed;
    if (r.failed) e["error"] = r.error;
    rs.push_back(std::move(e));
  }
  j["rows"] = std::move(rs);
  return j.dump(2);
}

GhSweepReport run_gh_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  need(cfg.kind == ExperimentKind::gh_sweep, "config kind is not gh-sweep");
  const GraphPtr base = generate(cfg.graph);
  GhSweepReport rep;
  rep.base = cfg.graph;
  rep.rows.resize(cfg.levels.size());
  parallel_for(static_cast<int>(cfg.levels.size()), [&](int i) {
    GhSweepRow& row = rep.rows[i];
    row.graph_expr = cfg.levels[i];
    try {
      const GraphPtr g = generate(row.graph_expr);
      const double radius =
          cfg.beta > 0.0
              ? cfg.beta
              : std::max(base->min_edge_length(), g->min_edge_length()) / 2.0;
      row.bound = gh_upper_bound(base, g, radius);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  });
  if (!cfg.out_dir.empty()) {
    write_outputs(cfg, "gh_sweep.json", rep.to_json(), "", "");
  }
  return rep;
}

GameRecord run_single_game(const ExperimentConfig& cfg) {
  cfg.validate();
  need(cfg.kind == ExperimentKind::single_game,
       "config kind is not single-game");
  const GraphPtr g = generate(cfg.graph);
  const double beta = cfg.beta > 0.0 ? cfg.beta : g->diameter() / 20.0;
  const GraphPoint L0 = g->vertex_point(0);
  const GraphPoint M0 = farthest_from(*g, L0);
  const auto pursuer = greedy_pursuer(g, beta);
  const auto evader = suite_member(g, beta, cfg.evaders.front(), cfg.seed)(L0, M0);
  return run_game(g, *pursuer, *evader, L0, M0, beta, cfg.T);
}

}  // namespace gp
