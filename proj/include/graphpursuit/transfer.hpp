#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphpursuit/chaining.hpp"
#include "graphpursuit/game.hpp"
#include "graphpursuit/strategy.hpp"

namespace gp {

/// The step size the transfer construction is proved for: the square root
/// of the chaining's distance budget.
double transfer_beta(const Chaining& ch);

struct TransferOptions {
  /// Capture radius the inner strategy is certified for. NaN skips the
  /// precondition checks and marks the strategy as unchecked.
  double alpha = std::numeric_limits<double>::quiet_NaN();
  /// Permit a beta different from transfer_beta(ch); the strategy is
  /// flagged so reports can surface the deviation.
  bool allow_beta_override = false;
};

/// A pursuer on graph A driven by an inner pursuer on graph B through a
/// chaining. Per step it (1) advances a shadow evader in B chasing the
/// mapped real evader, (2) asks the inner strategy for its move against
/// that shadow, (3) chases the mapped inner position in A. Everything it
/// consumes lags one step behind, so it is stepwise by construction.
class TransferredStrategy final : public Strategy {
 public:
  TransferredStrategy(std::shared_ptr<const Chaining> ch,
                      std::unique_ptr<Strategy> inner, double beta, double T,
                      const GraphPoint& L0, bool beta_overridden,
                      bool alpha_unchecked);

  GraphPoint next(const GraphPoint& own,
                  std::span<const GraphPoint> opponent_prefix) override;

  /// Extends both shadows to index horizon() using the finished game's
  /// evader trajectory, so diagnostics cover the full proof range.
  /// Idempotent.
  void finish(std::span<const GraphPoint> opponent_full);

  const Chaining& chaining() const { return *ch_; }
  const Trajectory& shadow_evader() const;
  const Trajectory& shadow_pursuer() const { return *l_shadow_; }
  int horizon() const { return horizon_; }
  bool beta_overridden() const { return beta_overridden_; }
  bool alpha_unchecked() const { return alpha_unchecked_; }

 private:
  void advance_shadows(int k, std::span<const GraphPoint> opponent);

  std::shared_ptr<const Chaining> ch_;
  std::unique_ptr<Strategy> inner_;
  std::optional<Trajectory> m_shadow_;  // evader's image chase, in B
  std::optional<Trajectory> l_shadow_;  // inner pursuer's run, in B
  GraphPoint L0_;
  int horizon_ = 0;
  int calls_ = 0;
  bool beta_overridden_ = false;
  bool alpha_unchecked_ = false;
};

/// Validates the preconditions (beta matches transfer_beta(ch) unless
/// overridden; alpha in (0,1) with budget < alpha^2 when supplied) and
/// builds the transferred pursuer starting at L0 in graph A.
std::unique_ptr<TransferredStrategy> transfer_strategy(
    std::shared_ptr<const Chaining> ch, std::unique_ptr<Strategy> inner,
    double beta, double T, const GraphPoint& L0,
    const TransferOptions& opts = {});

/// Largest deviation between distances before and after mapping, over a
/// size-capped sample of each space (a lower bound of the true sup).
struct MeasuredDistortion {
  double dis_f = 0.0;        // B -> A
  double dis_f_tilde = 0.0;  // A -> B
};
MeasuredDistortion measure_chaining_distortion(const Chaining& ch,
                                               int sample_cap = 300);

struct TransferGameReport {
  int evader = 0;  // suite index
  GraphPoint L0{0, 0.0};
  GraphPoint M0{0, 0.0};
  double min_distance = 0.0;
  int argmin_step = 0;
  double inner_min_distance = 0.0;  // shadow game, in B
  int tau = 0;                      // shadow game's argmin grid step
  double distance_at_tau = 0.0;     // real game's distance there
  double dis_f_used = 0.0;          // sample measurement plus this game's pairs
  double dis_f_tilde_used = 0.0;
  double worst_shadow_gap_excess = 0.0;  // evader-side per-step inequality
  double worst_real_gap_excess = 0.0;    // pursuer-side per-step inequality
  double chain_bound = 0.0;  // inner_min + 2b + 2disf + N(disf+disft) + param
  bool chain_violated = false;
  bool violated = false;  // min_distance > headline bound
  std::vector<double> shadow_gaps;  // per step; strided when the run is long
  std::vector<double> real_gaps;
};

struct TransferReport {
  double alpha = 0.0;
  double T = 0.0;
  double beta = 0.0;
  double eps = 0.0;    // chaining budget
  double bound = 0.0;  // alpha + (20T+8)*sqrt(eps)
  double grid_slack = 0.0;
  double dis_f_measured = 0.0;
  double dis_f_tilde_measured = 0.0;
  bool beta_overridden = false;
  std::vector<TransferGameReport> games;
  double worst_min_distance = 0.0;
  bool violated = false;

  std::string to_json() const;
};

/// Builds a fresh inner pursuer for graph B; receives its start point
/// (the mapped image of the real pursuer's start).
using InnerFactory =
    std::function<std::unique_ptr<Strategy>(const GraphPoint& start)>;

struct TransferCertifyOptions {
  double beta = 0.0;  // 0 -> transfer_beta(ch)
  bool allow_beta_override = false;
  int sample_cap = 300;
  double tolerance = 1e-7;  // per-step inequality slack
};

/// Runs every (evader, L0, M0) combination through the transferred
/// strategy and audits the proof's inequalities. Violations are report
/// entries, never exceptions.
TransferReport certify_transfer_bound(std::shared_ptr<const Chaining> ch,
                                      const InnerFactory& inner, double alpha,
                                      double T,
                                      std::span<const StrategyFactory> evader_suite,
                                      std::span<const GraphPoint> L0_set,
                                      std::span<const GraphPoint> M0_set,
                                      const TransferCertifyOptions& opts = {});

}  // namespace gp
