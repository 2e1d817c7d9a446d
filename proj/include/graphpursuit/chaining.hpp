#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpursuit/correspondence.hpp"
#include "graphpursuit/nets.hpp"

namespace gp {

/// Raised when no pairing of acceptable distortion exists at the chosen
/// net resolution; carries the best distortion the search achieved.
class ChainingError : public std::runtime_error {
 public:
  ChainingError(const std::string& what, double best_distortion)
      : std::runtime_error(what), best_distortion_(best_distortion) {}
  double best_distortion() const { return best_distortion_; }

 private:
  double best_distortion_;
};

/// A pair of cross-space projection maps between graphs a and b, built
/// from nets on each side and a low-distortion bijection h between them.
/// eval_f sends points of b onto the net in a (h after nearest-net-point
/// on the b side); eval_f_tilde is the mirror image. param is the scale
/// the pair is certified at: both nets cover their space within param and
/// dis h <= param/2. gh_budget records the distance budget between the
/// spaces that the construction was asked to certify.
class Chaining {
 public:
  Chaining(Net net_a, Net net_b, std::vector<int> pairing_b_to_a,
           double param, double gh_budget, bool exact_pairing);

  const MetricGraph& graph_a() const { return net_a_.graph(); }
  const MetricGraph& graph_b() const { return net_b_.graph(); }
  const std::shared_ptr<const MetricGraph>& graph_a_ptr() const {
    return net_a_.graph_ptr();
  }
  const std::shared_ptr<const MetricGraph>& graph_b_ptr() const {
    return net_b_.graph_ptr();
  }
  const Net& net_a() const { return net_a_; }
  const Net& net_b() const { return net_b_; }
  std::span<const int> pairing_b_to_a() const { return b_to_a_; }
  std::span<const int> pairing_a_to_b() const { return a_to_b_; }
  double param() const { return param_; }
  double gh_budget() const { return gh_budget_; }
  double dis_h() const { return dis_h_; }
  bool exact_pairing() const { return exact_pairing_; }

  GraphPoint eval_f(const GraphPoint& xb) const;
  GraphPoint eval_f_tilde(const GraphPoint& xa) const;

 private:
  Net net_a_;
  Net net_b_;
  std::vector<int> b_to_a_;
  std::vector<int> a_to_b_;
  double param_ = 0.0;
  double gh_budget_ = 0.0;
  double dis_h_ = 0.0;
  bool exact_pairing_ = true;
};

inline GraphPoint eval_f(const Chaining& ch, const GraphPoint& xb) {
  return ch.eval_f(xb);
}
inline GraphPoint eval_f_tilde(const Chaining& ch, const GraphPoint& xa) {
  return ch.eval_f_tilde(xa);
}

/// Constructs a chaining certifying that a and b are within eps of each
/// other: a net of radius 2*eps on b, one of radius 4*eps on a, and a
/// searched bijection that must come in at distortion <= 2*eps, giving a
/// chaining at param 4*eps. Throws ChainingError when the search cannot
/// reach that distortion.
Chaining build_chaining(std::shared_ptr<const MetricGraph> a,
                        std::shared_ptr<const MetricGraph> b, double eps);

/// Builds a chaining from explicit net points paired by index (points_a[i]
/// with points_b[i]). The pairing's distortion must be <= 2*gh_budget;
/// param becomes the smallest scale the result is a valid chaining at.
Chaining make_chaining(std::shared_ptr<const MetricGraph> a,
                       std::shared_ptr<const MetricGraph> b,
                       std::vector<GraphPoint> points_a,
                       std::vector<GraphPoint> points_b, double gh_budget);

std::string chaining_to_json(const Chaining& ch);
Chaining chaining_from_json(const std::string& text);

}  // namespace gp
