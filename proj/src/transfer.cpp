#include "graphpursuit/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "json.hpp"

namespace gp {

double transfer_beta(const Chaining& ch) { return std::sqrt(ch.gh_budget()); }

TransferredStrategy::TransferredStrategy(std::shared_ptr<const Chaining> ch,
                                         std::unique_ptr<Strategy> inner,
                                         double beta, double T,
                                         const GraphPoint& L0,
                                         bool beta_overridden,
                                         bool alpha_unchecked)
    : Strategy(ch->graph_a_ptr(), beta),
      ch_(std::move(ch)),
      inner_(std::move(inner)),
      L0_(L0),
      beta_overridden_(beta_overridden),
      alpha_unchecked_(alpha_unchecked) {
  horizon_ = horizon_steps(T, beta);
  graph_->validate_point(L0_);
  l_shadow_.emplace(ch_->graph_b_ptr(), beta,
                    std::vector<GraphPoint>{eval_f_tilde(*ch_, L0_)});
}

const Trajectory& TransferredStrategy::shadow_evader() const {
  if (!m_shadow_) throw DomainError("the shadow evader starts with the first move");
  return *m_shadow_;
}

void TransferredStrategy::advance_shadows(int k,
                                          std::span<const GraphPoint> opponent) {
  const MetricGraph& gb = *ch_->graph_b_ptr();
  if (k == 0) {
    m_shadow_.emplace(ch_->graph_b_ptr(), beta_,
                      std::vector<GraphPoint>{eval_f_tilde(*ch_, opponent[0])});
    return;
  }
  // Shadow evader chases the image of the real evader's previous position.
  const GraphPoint m_target = eval_f_tilde(*ch_, opponent[k - 1]);
  m_shadow_->append(
      beta_pursuit_step(gb, m_shadow_->back(), m_target, beta_));

  GraphPoint l_next = l_shadow_->back();
  if (k <= horizon_) {
    const std::span<const GraphPoint> m_pre(m_shadow_->positions().data(),
                                            static_cast<std::size_t>(k));
    l_next = inner_->next(l_shadow_->back(), m_pre);
    gb.validate_point(l_next);
    const double d = gb.distance(l_shadow_->back(), l_next);
    if (d > beta_ + kMetricTol) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "inner strategy emitted an inadmissible move at step %d: "
                    "displacement %.6g exceeds beta %.6g",
                    k, d, beta_);
      throw ProtocolError(buf);
    }
  }  // beyond its horizon the inner pursuer holds position
  l_shadow_->append(l_next);
}

GraphPoint TransferredStrategy::next(const GraphPoint& own,
                                     std::span<const GraphPoint> opponent_prefix) {
  const int k = calls_;
  if (static_cast<int>(opponent_prefix.size()) < k + 1) {
    throw DomainError("opponent prefix is shorter than the transfer step counter");
  }
  if (k == 0) advance_shadows(0, opponent_prefix);
  else advance_shadows(k, opponent_prefix);
  ++calls_;
  const GraphPoint target = eval_f(*ch_, l_shadow_->position(k));
  return beta_pursuit_step(*graph_, own, target, beta_);
}

void TransferredStrategy::finish(std::span<const GraphPoint> opponent_full) {
  if (!m_shadow_) {
    if (opponent_full.empty()) throw DomainError("cannot finish an unstarted game");
    advance_shadows(0, opponent_full);
  }
  while (m_shadow_->size() <= horizon_) {
    const int k = m_shadow_->size();
    if (static_cast<int>(opponent_full.size()) < k) {
      throw DomainError("finish needs the evader's positions through the horizon");
    }
    advance_shadows(k, opponent_full);
  }
}

std::unique_ptr<TransferredStrategy> transfer_strategy(
    std::shared_ptr<const Chaining> ch, std::unique_ptr<Strategy> inner,
    double beta, double T, const GraphPoint& L0, const TransferOptions& opts) {
  if (!ch) throw DomainError("transfer requires a chaining");
  if (!inner) throw DomainError("transfer requires an inner strategy");
  if (inner->graph_ptr().get() != ch->graph_b_ptr().get()) {
    throw DomainError("inner strategy must live on the chaining's b side");
  }
  if (!(beta > 0.0)) throw DomainError("beta must be positive");
  if (std::abs(inner->beta() - beta) > kMetricTol) {
    throw DomainError("inner strategy was built for a different beta");
  }

  const double want = transfer_beta(*ch);
  bool overridden = false;
  if (std::abs(beta - want) > 1e-9 * std::max(1.0, want)) {
    if (!opts.allow_beta_override) {
      char buf[200];
      std::snprintf(buf, sizeof(buf),
                    "transfer is proved for beta = sqrt(budget) = %.9g, got "
                    "%.9g; set allow_beta_override to experiment anyway",
                    want, beta);
      throw DomainError(buf);
    }
    overridden = true;
  }

  bool alpha_unchecked = true;
  if (!std::isnan(opts.alpha)) {
    alpha_unchecked = false;
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) {
      throw DomainError("alpha must lie in (0, 1)");
    }
    const double eps = ch->gh_budget();
    if (!(eps > 0.0 && eps < opts.alpha * opts.alpha)) {
      throw DomainError("the chaining budget must lie in (0, alpha^2)");
    }
  }

  return std::make_unique<TransferredStrategy>(std::move(ch), std::move(inner),
                                               beta, T, L0, overridden,
                                               alpha_unchecked);
}

MeasuredDistortion measure_chaining_distortion(const Chaining& ch,
                                               int sample_cap) {
  MeasuredDistortion out;
  const MetricGraph& ga = *ch.graph_a_ptr();
  const MetricGraph& gb = *ch.graph_b_ptr();

  auto one_side = [&](const MetricGraph& from, const MetricGraph& to,
                      auto&& map) {
    const double spacing =
        std::max(from.total_edge_length() / std::max(sample_cap, 1),
                 from.min_edge_length() / 4.0);
    const std::vector<GraphPoint> pts =
        sample_points(from, spacing, sample_cap);
    std::vector<GraphPoint> img;
    img.reserve(pts.size());
    for (const GraphPoint& p : pts) img.push_back(map(p));
    double dis = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        dis = std::max(dis, std::abs(to.distance(img[i], img[j]) -
                                     from.distance(pts[i], pts[j])));
      }
    }
    return dis;
  };

  out.dis_f = one_side(gb, ga, [&](const GraphPoint& p) { return eval_f(ch, p); });
  out.dis_f_tilde =
      one_side(ga, gb, [&](const GraphPoint& p) { return eval_f_tilde(ch, p); });
  return out;
}

namespace {

nlohmann::json point_json(const GraphPoint& p) {
  return nlohmann::json{{"edge", p.edge}, {"offset", p.offset}};
}

}  // namespace

std::string TransferReport::to_json() const {
  nlohmann::json j;
  j["alpha"] = alpha;
  j["T"] = T;
  j["beta"] = beta;
  j["eps"] = eps;
  j["bound"] = bound;
  j["grid_slack"] = grid_slack;
  j["dis_f_measured"] = dis_f_measured;
  j["dis_f_tilde_measured"] = dis_f_tilde_measured;
  j["beta_overridden"] = beta_overridden;
  j["worst_min_distance"] = worst_min_distance;
  j["violated"] = violated;
  nlohmann::json arr = nlohmann::json::array();
  for (const TransferGameReport& g : games) {
    nlohmann::json e;
    e["evader"] = g.evader;
    e["L0"] = point_json(g.L0);
    e["M0"] = point_json(g.M0);
    e["min_distance"] = g.min_distance;
    e["argmin_step"] = g.argmin_step;
    e["inner_min_distance"] = g.inner_min_distance;
    e["tau"] = g.tau;
    e["distance_at_tau"] = g.distance_at_tau;
    e["dis_f_used"] = g.dis_f_used;
    e["dis_f_tilde_used"] = g.dis_f_tilde_used;
    e["worst_shadow_gap_excess"] = g.worst_shadow_gap_excess;
    e["worst_real_gap_excess"] = g.worst_real_gap_excess;
    e["chain_bound"] = g.chain_bound;
    e["chain_violated"] = g.chain_violated;
    e["violated"] = g.violated;
    e["shadow_gaps"] = g.shadow_gaps;
    e["real_gaps"] = g.real_gaps;
    arr.push_back(std::move(e));
  }
  j["games"] = std::move(arr);
  return j.dump(2);
}

TransferReport certify_transfer_bound(std::shared_ptr<const Chaining> ch,
                                      const InnerFactory& inner, double alpha,
                                      double T,
                                      std::span<const StrategyFactory> evader_suite,
                                      std::span<const GraphPoint> L0_set,
                                      std::span<const GraphPoint> M0_set,
                                      const TransferCertifyOptions& opts) {
  if (!ch) throw DomainError("certification requires a chaining");
  if (evader_suite.empty()) throw DomainError("evader suite must be nonempty");
  if (L0_set.empty() || M0_set.empty()) {
    throw DomainError("start sets must be nonempty");
  }

  const double beta = opts.beta > 0.0 ? opts.beta : transfer_beta(*ch);
  const double eps = ch->gh_budget();

  TransferReport rep;
  rep.alpha = alpha;
  rep.T = T;
  rep.beta = beta;
  rep.eps = eps;
  rep.bound = alpha + (20.0 * T + 8.0) * std::sqrt(eps);
  rep.grid_slack = beta;  // off-grid times deviate by at most 2*(beta/2)

  const MeasuredDistortion sampled = measure_chaining_distortion(*ch, opts.sample_cap);
  rep.dis_f_measured = sampled.dis_f;
  rep.dis_f_tilde_measured = sampled.dis_f_tilde;

  const MetricGraph& ga = *ch->graph_a_ptr();
  const MetricGraph& gb = *ch->graph_b_ptr();

  TransferOptions topts;
  topts.alpha = alpha;
  topts.allow_beta_override = opts.allow_beta_override || opts.beta > 0.0;

  for (std::size_t ev = 0; ev < evader_suite.size(); ++ev) {
    for (const GraphPoint& L0 : L0_set) {
      for (const GraphPoint& M0 : M0_set) {
        auto transferred =
            transfer_strategy(ch, inner(eval_f_tilde(*ch, L0)), beta, T, L0,
                              topts);
        auto evader = evader_suite[ev](L0, M0);
        const GameRecord rec =
            run_game(ch->graph_a_ptr(), *transferred, *evader, L0, M0, beta, T);
        rec.validate();
        transferred->finish(rec.evader.positions());

        const Trajectory& M = rec.evader;
        const Trajectory& L = rec.pursuer;
        const Trajectory& Ms = transferred->shadow_evader();
        const Trajectory& Ls = transferred->shadow_pursuer();
        const int n = rec.steps;

        TransferGameReport game;
        game.evader = static_cast<int>(ev);
        game.L0 = L0;
        game.M0 = M0;
        game.min_distance = rec.min_distance;
        game.argmin_step = rec.argmin_step;

        // Images used in several places below.
        std::vector<GraphPoint> m_img(static_cast<std::size_t>(n) + 1),
            ls_img(static_cast<std::size_t>(n) + 1),
            ms_img(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) {
          m_img[i] = eval_f_tilde(*ch, M.position(i));
          ls_img[i] = eval_f(*ch, Ls.position(i));
          ms_img[i] = eval_f(*ch, Ms.position(i));
        }

        // Distortion actually exhibited by this game's point pairs; the
        // per-step inequalities are proved against these quantities, so
        // fold them into the sampled measurement.
        double wit_f = sampled.dis_f, wit_ft = sampled.dis_f_tilde;
        for (int i = 0; i < n; ++i) {
          wit_ft = std::max(
              wit_ft, std::abs(gb.distance(m_img[i], m_img[i + 1]) -
                               ga.distance(M.position(i), M.position(i + 1))));
          wit_f = std::max(
              wit_f, std::abs(ga.distance(ls_img[i], ls_img[i + 1]) -
                              gb.distance(Ls.position(i), Ls.position(i + 1))));
        }
        for (int i = 0; i <= n; ++i) {
          wit_f = std::max(
              wit_f, std::abs(ga.distance(ls_img[i], ms_img[i]) -
                              gb.distance(Ls.position(i), Ms.position(i))));
          wit_f = std::max(
              wit_f, std::abs(ga.distance(ms_img[i], eval_f(*ch, m_img[i])) -
                              gb.distance(Ms.position(i), m_img[i])));
        }
        game.dis_f_used = wit_f;
        game.dis_f_tilde_used = wit_ft;

        // Shadow game value and the grid time nearest its best moment.
        double inner_min = gb.distance(Ls.position(0), Ms.position(0));
        int tau = 0;
        for (int i = 1; i <= n; ++i) {
          const double d = gb.distance(Ls.position(i), Ms.position(i));
          if (d < inner_min) {
            inner_min = d;
            tau = i;
          }
        }
        game.inner_min_distance = inner_min;
        game.tau = tau;
        game.distance_at_tau = rec.distances[static_cast<std::size_t>(tau)];

        // Per-step proof inequalities.
        const int stride = n > 1000 ? (n + 999) / 1000 : 1;
        double worst_m = -1e300, worst_l = -1e300;
        for (int i = 0; i <= n; ++i) {
          const double gap_m = gb.distance(m_img[i], Ms.position(i));
          const double gap_l = ga.distance(ls_img[i], L.position(i));
          worst_m = std::max(worst_m, gap_m - (beta + i * wit_ft));
          worst_l = std::max(worst_l, gap_l - (beta + i * wit_f));
          if (i % stride == 0 || i == n) {
            game.shadow_gaps.push_back(gap_m);
            game.real_gaps.push_back(gap_l);
          }
        }
        game.worst_shadow_gap_excess = worst_m;
        game.worst_real_gap_excess = worst_l;

        game.chain_bound = inner_min + 2.0 * beta + 2.0 * wit_f +
                           n * (wit_f + wit_ft) + ch->param();
        game.chain_violated = rec.min_distance > game.chain_bound + opts.tolerance;
        game.violated = rec.min_distance > rep.bound + 1e-9;

        rep.dis_f_measured = std::max(rep.dis_f_measured, wit_f);
        rep.dis_f_tilde_measured = std::max(rep.dis_f_tilde_measured, wit_ft);
        rep.worst_min_distance =
            std::max(rep.worst_min_distance, rec.min_distance);
        rep.violated = rep.violated || game.violated;
        rep.beta_overridden =
            rep.beta_overridden || transferred->beta_overridden();
        rep.games.push_back(std::move(game));
      }
    }
  }
  return rep;
}

}  // namespace gp
