#include "graphpursuit/chaining.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace gp {

Chaining::Chaining(Net net_a, Net net_b, std::vector<int> pairing_b_to_a,
                   double param, double gh_budget, bool exact_pairing)
    : net_a_(std::move(net_a)),
      net_b_(std::move(net_b)),
      b_to_a_(std::move(pairing_b_to_a)),
      param_(param),
      gh_budget_(gh_budget),
      exact_pairing_(exact_pairing) {
  const int k = net_b_.size();
  if (net_a_.size() != k) throw DomainError("chaining nets must have equal sizes");
  if (!(param_ > 0.0)) throw DomainError("chaining parameter must be positive");
  if (!(gh_budget_ > 0.0)) throw DomainError("distance budget must be positive");
  dis_h_ = pairing_distortion(net_b_, net_a_, b_to_a_);  // validates bijection
  a_to_b_.assign(k, -1);
  for (int j = 0; j < k; ++j) a_to_b_[b_to_a_[j]] = j;

  if (dis_h_ > param_ / 2.0 + kMetricTol)
    throw DomainError("pairing distortion exceeds half the chaining parameter");
  if (net_a_.radius() > param_ + kMetricTol ||
      net_b_.radius() > param_ + kMetricTol)
    throw DomainError("net radius exceeds the chaining parameter");
}

GraphPoint Chaining::eval_f(const GraphPoint& xb) const {
  return net_a_.point(b_to_a_[net_b_.nearest_index(xb)]);
}

GraphPoint Chaining::eval_f_tilde(const GraphPoint& xa) const {
  return net_b_.point(a_to_b_[net_a_.nearest_index(xa)]);
}

Chaining build_chaining(std::shared_ptr<const MetricGraph> a,
                        std::shared_ptr<const MetricGraph> b, double eps) {
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  // One candidate grid for both sides: equal spaces then produce equal
  // sampling sequences, so the two nets coincide and pair at distortion 0.
  const double spacing = std::min({2.0 * eps, a->min_edge_length(),
                                   b->min_edge_length()}) /
                         4.0;
  Net net_b = build_eps_net(b, 2.0 * eps, 1, spacing);
  Net net_a = build_eps_net(a, 4.0 * eps, net_b.size(), spacing);
  // The pairing needs equal sizes; extra rounds of sampling only shrink a
  // net's radius, so grow the smaller one until they match.
  while (net_a.size() != net_b.size()) {
    if (net_a.size() < net_b.size())
      net_a = build_eps_net(a, 4.0 * eps, net_b.size(), spacing);
    else
      net_b = build_eps_net(b, 2.0 * eps, net_a.size(), spacing);
  }
  Correspondence corr = min_distortion_bijection(net_b, net_a);
  if (corr.distortion > 2.0 * eps + kMetricTol)
    throw ChainingError(
        "no pairing of distortion <= " + std::to_string(2.0 * eps) +
            " found (best " + std::to_string(corr.distortion) +
            "); the spaces are not verifiably this close at this resolution",
        corr.distortion);
  return Chaining(std::move(net_a), std::move(net_b), std::move(corr.pairing),
                  4.0 * eps, eps, corr.exact);
}

Chaining make_chaining(std::shared_ptr<const MetricGraph> a,
                       std::shared_ptr<const MetricGraph> b,
                       std::vector<GraphPoint> points_a,
                       std::vector<GraphPoint> points_b, double gh_budget) {
  if (!(gh_budget > 0.0)) throw DomainError("distance budget must be positive");
  if (points_a.size() != points_b.size())
    throw DomainError("point lists must have equal sizes");
  Net net_a(std::move(a), std::move(points_a));
  Net net_b(std::move(b), std::move(points_b));
  std::vector<int> identity(net_b.size());
  for (int i = 0; i < net_b.size(); ++i) identity[i] = i;
  const double dis = pairing_distortion(net_b, net_a, identity);
  if (dis > 2.0 * gh_budget + kMetricTol)
    throw ChainingError("index pairing distortion " + std::to_string(dis) +
                            " exceeds twice the distance budget " +
                            std::to_string(gh_budget),
                        dis);
  const double param =
      std::max({net_a.radius(), net_b.radius(), 2.0 * dis});
  return Chaining(std::move(net_a), std::move(net_b), std::move(identity),
                  param, gh_budget, true);
}

std::string chaining_to_json(const Chaining& ch) {
  nlohmann::json j;
  j["param"] = ch.param();
  j["gh_budget"] = ch.gh_budget();
  j["exact_pairing"] = ch.exact_pairing();
  j["graph_a"] = nlohmann::json::parse(graph_to_json(ch.graph_a()));
  j["graph_b"] = nlohmann::json::parse(graph_to_json(ch.graph_b()));
  auto points = [](const Net& net) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : net.points())
      arr.push_back({{"edge", p.edge}, {"offset", p.offset}});
    return arr;
  };
  j["net_a"] = points(ch.net_a());
  j["net_b"] = points(ch.net_b());
  j["pairing_b_to_a"] = std::vector<int>(ch.pairing_b_to_a().begin(),
                                         ch.pairing_b_to_a().end());
  return j.dump(2);
}

Chaining chaining_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& ex) {
    throw DomainError(std::string("chaining parse error: ") + ex.what());
  }
  for (const char* key : {"param", "gh_budget", "graph_a", "graph_b", "net_a",
                          "net_b", "pairing_b_to_a"})
    if (!j.contains(key))
      throw DomainError(std::string("chaining file missing field ") + key);
  auto ga = std::make_shared<const MetricGraph>(graph_from_json(j["graph_a"].dump()));
  auto gb = std::make_shared<const MetricGraph>(graph_from_json(j["graph_b"].dump()));
  auto points = [](const nlohmann::json& arr) {
    std::vector<GraphPoint> pts;
    for (const auto& e : arr)
      pts.push_back({e.at("edge").get<int>(), e.at("offset").get<double>()});
    return pts;
  };
  Net net_a(ga, points(j["net_a"]));
  Net net_b(gb, points(j["net_b"]));
  return Chaining(std::move(net_a), std::move(net_b),
                  j["pairing_b_to_a"].get<std::vector<int>>(),
                  j["param"].get<double>(), j["gh_budget"].get<double>(),
                  j.value("exact_pairing", true));
}

}  // namespace gp
