#include "graphpursuit/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace gp {

namespace {

std::vector<std::vector<double>> pairwise(const Net& n) {
  const int k = n.size();
  std::vector<std::vector<double>> d(k, std::vector<double>(k, 0.0));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      d[i][j] = d[j][i] = n.graph().distance(n.point(i), n.point(j));
  return d;
}

using Matrix = std::vector<std::vector<double>>;

double perm_distortion(const Matrix& da, const Matrix& db,
                       std::span<const int> sigma) {
  const int n = static_cast<int>(sigma.size());
  double dis = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      dis = std::max(dis, std::abs(da[i][j] - db[sigma[i]][sigma[j]]));
  return dis;
}

void check_pairing(int na, int nb, std::span<const int> pairing) {
  if (na != nb) throw DomainError("nets must have equal sizes");
  if (static_cast<int>(pairing.size()) != na)
    throw DomainError("pairing size does not match the nets");
  std::vector<char> used(na, 0);
  for (int m : pairing) {
    if (m < 0 || m >= na || used[m])
      throw DomainError("pairing must be a bijection");
    used[m] = 1;
  }
}

struct BranchState {
  const Matrix& da;
  const Matrix& db;
  int n;
  std::vector<int> sigma;
  std::vector<char> used;
  std::vector<int> best;
  double best_val;

  // Enumerates images in ascending order and prunes only strictly worse
  // partials, so every optimum is visited and the lexicographically first
  // one wins ties.
  void search(int k, double partial) {
    if (k == n) {
      if (partial < best_val || (partial == best_val && sigma < best)) {
        best_val = partial;
        best = sigma;
      }
      return;
    }
    for (int m = 0; m < n; ++m) {
      if (used[m]) continue;
      double np = partial;
      for (int i = 0; i < k && np <= best_val; ++i)
        np = std::max(np, std::abs(da[i][k] - db[sigma[i]][m]));
      if (np > best_val) continue;
      sigma[k] = m;
      used[m] = 1;
      search(k + 1, np);
      used[m] = 0;
    }
  }
};

// Sorted row of distances from each point to all others; near-isometric
// nets give nearly equal profiles, so greedily matching the closest
// profiles (in sup norm) aligns them geometrically.
Matrix profiles(const Matrix& d) {
  Matrix p = d;
  for (auto& row : p) std::sort(row.begin(), row.end());
  return p;
}

std::vector<int> profile_assignment(const Matrix& da, const Matrix& db,
                                    std::mt19937& rng, bool jitter) {
  const int n = static_cast<int>(da.size());
  const Matrix pa = profiles(da);
  const Matrix pb = profiles(db);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  Matrix cost(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double c = 0.0;
      for (int t = 0; t < n; ++t) c = std::max(c, std::abs(pa[i][t] - pb[j][t]));
      cost[i][j] = jitter ? c * (1.0 + u(rng)) : c;
    }
  std::vector<int> sigma(n, -1);
  std::vector<char> used_i(n, 0), used_j(n, 0);
  for (int step = 0; step < n; ++step) {
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (used_i[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (used_j[j]) continue;
        if (bi < 0 || cost[i][j] < cost[bi][bj]) {
          bi = i;
          bj = j;
        }
      }
    }
    sigma[bi] = bj;
    used_i[bi] = 1;
    used_j[bj] = 1;
  }
  return sigma;
}

void two_swap_descent(const Matrix& da, const Matrix& db,
                      std::vector<int>& sigma, double& val) {
  const int n = static_cast<int>(sigma.size());
  for (int pass = 0; pass < 200; ++pass) {
    bool improved = false;
    for (int i = 0; i < n && !improved; ++i)
      for (int j = i + 1; j < n && !improved; ++j) {
        std::swap(sigma[i], sigma[j]);
        const double v = perm_distortion(da, db, sigma);
        if (v < val) {
          val = v;
          improved = true;
        } else {
          std::swap(sigma[i], sigma[j]);
        }
      }
    if (!improved) return;
  }
}

}  // namespace

double pairing_distortion(const Net& from, const Net& to,
                          std::span<const int> pairing) {
  check_pairing(from.size(), to.size(), pairing);
  // Streamed: the nets can hold tens of thousands of points, where the
  // full distance matrices would not fit in memory.
  const int n = from.size();
  const MetricGraph& ga = from.graph();
  const MetricGraph& gb = to.graph();
  double dis = 0.0;
  for (int i = 0; i < n; ++i) {
    const GraphPoint& pi = from.point(i);
    const GraphPoint& qi = to.point(pairing[i]);
    for (int j = i + 1; j < n; ++j) {
      const double gap = std::abs(ga.distance(pi, from.point(j)) -
                                  gb.distance(qi, to.point(pairing[j])));
      if (gap > dis) dis = gap;
    }
  }
  return dis;
}

double distortion_of(const Correspondence& corr) {
  return pairing_distortion(corr.from, corr.to, corr.pairing);
}

Correspondence min_distortion_bijection(const Net& from, const Net& to) {
  if (from.size() != to.size()) throw DomainError("nets must have equal sizes");
  const int n = from.size();
  const Matrix da = pairwise(from);
  const Matrix db = pairwise(to);

  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  const double identity_val = perm_distortion(da, db, identity);

  std::vector<int> best = identity;
  double best_val = identity_val;
  bool exact = true;

  if (n <= 9) {
    BranchState bb{da, db, n, std::vector<int>(n, -1),
                   std::vector<char>(n, 0), best, best_val};
    bb.search(0, 0.0);
    best = std::move(bb.best);
    best_val = bb.best_val;
  } else {
    exact = false;
    for (unsigned seed = 0; seed < 20; ++seed) {
      std::mt19937 rng(seed);
      std::vector<int> sigma = profile_assignment(da, db, rng, seed != 0);
      double val = perm_distortion(da, db, sigma);
      two_swap_descent(da, db, sigma, val);
      if (val < best_val) {
        best_val = val;
        best = std::move(sigma);
      }
    }
    double id_val = identity_val;
    std::vector<int> id_sigma = identity;
    two_swap_descent(da, db, id_sigma, id_val);
    if (id_val < best_val) {
      best_val = id_val;
      best = std::move(id_sigma);
    }
  }
  return Correspondence{from, to, std::move(best), best_val, exact};
}

}  // namespace gp
