#include "graphpursuit/generators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace gp {

namespace {

using GraphPtr = std::shared_ptr<const MetricGraph>;

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

GraphPtr make_interval(double length) {
  require(length > 0.0, "interval length must be positive");
  return std::make_shared<MetricGraph>(2, std::vector<Edge>{{0, 1, length}});
}

GraphPtr make_circle(double circumference) {
  require(circumference > 0.0, "circle circumference must be positive");
  const double half = circumference / 2.0;
  return std::make_shared<MetricGraph>(
      2, std::vector<Edge>{{0, 1, half}, {0, 1, half}});
}

GraphPtr make_theta(double l1, double l2, double l3) {
  require(l1 > 0.0 && l2 > 0.0 && l3 > 0.0,
          "theta edge lengths must be positive");
  return std::make_shared<MetricGraph>(
      2, std::vector<Edge>{{0, 1, l1}, {0, 1, l2}, {0, 1, l3}});
}

GraphPtr make_grid_disk(double radius, double spacing) {
  require(radius > 0.0 && spacing > 0.0,
          "grid-disk radius and spacing must be positive");
  require(radius >= spacing,
          "grid-disk radius below the spacing leaves no edges");
  const double slack = 1e-9 * std::max(1.0, radius);
  const int reach = static_cast<int>(std::floor(radius / spacing)) + 1;

  std::map<std::pair<int, int>, int> id;
  auto inside = [&](int i, int j) {
    return std::hypot(i * spacing, j * spacing) <= radius + slack;
  };
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -reach; j <= reach; ++j) {
      if (inside(i, j)) id.emplace(std::pair{i, j}, static_cast<int>(id.size()));
    }
  }
  std::vector<Edge> edges;
  for (const auto& [ij, v] : id) {
    const auto [i, j] = ij;
    if (auto it = id.find({i + 1, j}); it != id.end())
      edges.push_back({v, it->second, spacing});
    if (auto it = id.find({i, j + 1}); it != id.end())
      edges.push_back({v, it->second, spacing});
  }
  return std::make_shared<MetricGraph>(static_cast<int>(id.size()),
                                       std::move(edges));
}

GraphPtr make_torus_grid(int m, int n, double spacing) {
  require(m >= 2 && n >= 2, "torus-grid needs at least 2 rows and columns");
  require(spacing > 0.0, "torus-grid spacing must be positive");
  auto id = [n](int i, int j) { return i * n + j; };
  std::vector<Edge> edges;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      edges.push_back({id(i, j), id((i + 1) % m, j), spacing});
      edges.push_back({id(i, j), id(i, (j + 1) % n), spacing});
    }
  }
  return std::make_shared<MetricGraph>(m * n, std::move(edges));
}

GraphPtr make_random_tree(int n, unsigned long long seed) {
  require(n >= 2, "random-tree needs at least 2 vertices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> len(0.25, 1.0);
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    const int p = parent(rng);
    edges.push_back({p, i, len(rng)});
  }
  return std::make_shared<MetricGraph>(n, std::move(edges));
}

GraphPtr make_polygon(double circumference, int segments) {
  require(circumference > 0.0, "polygon circumference must be positive");
  require(segments >= 2, "polygon needs at least 2 segments");
  const double piece = circumference / segments;
  std::vector<Edge> edges;
  for (int i = 0; i < segments; ++i) {
    edges.push_back({i, (i + 1) % segments, piece});
  }
  return std::make_shared<MetricGraph>(segments, std::move(edges));
}

namespace {

std::vector<double> parse_args(const std::string& inner,
                               const std::string& expr) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= inner.size()) {
    std::size_t next = inner.find(',', pos);
    if (next == std::string::npos) next = inner.size();
    const std::string tok = inner.substr(pos, next - pos);
    std::size_t used = 0;
    double val = 0.0;
    try {
      val = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw DomainError("generator expression '" + expr +
                        "' has a malformed numeric argument '" + tok + "'");
    }
    while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
      ++used;
    if (used != tok.size())
      throw DomainError("generator expression '" + expr +
                        "' has a malformed numeric argument '" + tok + "'");
    out.push_back(val);
    pos = next + 1;
    if (next == inner.size()) break;
  }
  return out;
}

int as_int(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 || std::abs(r) > 1e18) {
    throw DomainError(std::string(what) + " must be an integer");
  }
  return static_cast<int>(r);
}

}  // namespace

GraphPtr generate(const std::string& expr) {
  std::string s;
  for (char c : expr) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  const std::size_t open = s.find('(');
  if (open == std::string::npos || s.empty() || s.back() != ')') {
    throw DomainError("generator expression must look like kind(args), got '" +
                      expr + "'");
  }
  const std::string kind = s.substr(0, open);
  const std::string inner = s.substr(open + 1, s.size() - open - 2);
  if (inner.empty()) {
    throw DomainError("generator expression '" + expr + "' has no arguments");
  }
  const std::vector<double> a = parse_args(inner, expr);

  auto arity = [&](std::size_t want) {
    if (a.size() != want) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "generator '%s' takes %zu argument(s), got %zu",
                    kind.c_str(), want, a.size());
      throw DomainError(buf);
    }
  };

  if (kind == "interval") {
    arity(1);
    return make_interval(a[0]);
  }
  if (kind == "circle") {
    arity(1);
    return make_circle(a[0]);
  }
  if (kind == "theta") {
    arity(3);
    return make_theta(a[0], a[1], a[2]);
  }
  if (kind == "grid-disk") {
    arity(2);
    return make_grid_disk(a[0], a[1]);
  }
  if (kind == "torus-grid") {
    arity(3);
    return make_torus_grid(as_int(a[0], "torus-grid m"),
                           as_int(a[1], "torus-grid n"), a[2]);
  }
  if (kind == "random-tree") {
    arity(2);
    return make_random_tree(
        as_int(a[0], "random-tree n"),
        static_cast<unsigned long long>(as_int(a[1], "random-tree seed")));
  }
  if (kind == "polygon") {
    arity(2);
    return make_polygon(a[0], as_int(a[1], "polygon segments"));
  }
  throw DomainError("unknown generator kind '" + kind +
                    "'; expected interval, circle, theta, grid-disk, "
                    "torus-grid, random-tree, or polygon");
}

}  // namespace gp
