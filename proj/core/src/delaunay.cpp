#include "geoling/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace geoling {

namespace {

struct Tri {
  int a, b, c;
};

// > 0 when (a, b, c) is counter-clockwise.
long double orient2d(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c) {
  const long double abx = static_cast<long double>(b.x) - a.x;
  const long double aby = static_cast<long double>(b.y) - a.y;
  const long double acx = static_cast<long double>(c.x) - a.x;
  const long double acy = static_cast<long double>(c.y) - a.y;
  return abx * acy - aby * acx;
}

// Strictly-inside-circumcircle predicate for a CCW triangle (a, b, c).
bool in_circumcircle(const GeoPoint& a, const GeoPoint& b, const GeoPoint& c, const GeoPoint& p) {
  const long double ax = static_cast<long double>(a.x) - p.x;
  const long double ay = static_cast<long double>(a.y) - p.y;
  const long double bx = static_cast<long double>(b.x) - p.x;
  const long double by = static_cast<long double>(b.y) - p.y;
  const long double cx = static_cast<long double>(c.x) - p.x;
  const long double cy = static_cast<long double>(c.y) - p.y;
  const long double a2 = ax * ax + ay * ay;
  const long double b2 = bx * bx + by * by;
  const long double c2 = cx * cx + cy * cy;
  const long double det = ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
  return det > 0.0L;
}

// Bowyer-Watson over distinct sites; returns the undirected edge set.
std::set<std::pair<int, int>> triangulate(const std::vector<GeoPoint>& sites) {
  const int n = static_cast<int>(sites.size());

  double min_x = sites[0].x, max_x = sites[0].x;
  double min_y = sites[0].y, max_y = sites[0].y;
  for (const auto& s : sites) {
    min_x = std::min(min_x, s.x);
    max_x = std::max(max_x, s.x);
    min_y = std::min(min_y, s.y);
    max_y = std::max(max_y, s.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  const double cx = 0.5 * (min_x + max_x);
  const double cy = 0.5 * (min_y + max_y);

  // Collinearity guard: every site against the first non-degenerate base pair.
  {
    int base = 1;
    while (base < n && sites[static_cast<size_t>(base)] == sites[0]) ++base;
    bool collinear = true;
    for (int i = base + 1; i < n && collinear; ++i) {
      const long double cross = orient2d(sites[0], sites[static_cast<size_t>(base)], sites[static_cast<size_t>(i)]);
      if (std::abs(static_cast<double>(cross)) > 1e-14 * span * span) {
        collinear = false;
      }
    }
    if (base >= n || collinear) {
      throw std::invalid_argument("delaunay_edges: all unique sites are collinear");
    }
  }

  // Vertices n, n+1, n+2 form a super-triangle enclosing every site.
  std::vector<GeoPoint> pts = sites;
  pts.push_back({cx - 64.0 * span, cy - 32.0 * span});
  pts.push_back({cx + 64.0 * span, cy - 32.0 * span});
  pts.push_back({cx, cy + 64.0 * span});

  std::vector<Tri> tris = {{n, n + 1, n + 2}};
  std::vector<Tri> bad;
  std::map<std::pair<int, int>, int> edge_count;

  auto ccw = [&](Tri t) {
    if (orient2d(pts[static_cast<size_t>(t.a)], pts[static_cast<size_t>(t.b)], pts[static_cast<size_t>(t.c)]) < 0.0L) {
      std::swap(t.b, t.c);
    }
    return t;
  };

  for (int p = 0; p < n; ++p) {
    bad.clear();
    std::vector<Tri> keep;
    keep.reserve(tris.size());
    for (const Tri& t : tris) {
      const Tri u = ccw(t);
      if (in_circumcircle(pts[static_cast<size_t>(u.a)], pts[static_cast<size_t>(u.b)],
                          pts[static_cast<size_t>(u.c)], pts[static_cast<size_t>(p)])) {
        bad.push_back(t);
      } else {
        keep.push_back(t);
      }
    }

    edge_count.clear();
    auto add_edge = [&](int u, int v) { ++edge_count[std::minmax(u, v)]; };
    for (const Tri& t : bad) {
      add_edge(t.a, t.b);
      add_edge(t.b, t.c);
      add_edge(t.c, t.a);
    }

    tris = std::move(keep);
    for (const auto& [e, count] : edge_count) {
      if (count == 1) {
        tris.push_back({e.first, e.second, p});
      }
    }
  }

  std::set<std::pair<int, int>> edges;
  for (const Tri& t : tris) {
    if (t.a >= n || t.b >= n || t.c >= n) continue;
    edges.insert(std::minmax(t.a, t.b));
    edges.insert(std::minmax(t.b, t.c));
    edges.insert(std::minmax(t.c, t.a));
  }
  if (edges.empty()) {
    throw std::invalid_argument("delaunay_edges: degenerate triangulation");
  }
  return edges;
}

}  // namespace

SpatialWeights delaunay_edges(const PointSet& ps) {
  const Eigen::Index n = ps.size();

  // Collapse exactly-identical coordinates to single sites.
  std::map<std::pair<double, double>, int> site_index;
  std::vector<GeoPoint> sites;
  std::vector<int> site_of(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const GeoPoint& p = ps[i];
    auto [it, inserted] = site_index.try_emplace({p.x, p.y}, static_cast<int>(sites.size()));
    if (inserted) {
      sites.push_back(p);
    }
    site_of[static_cast<size_t>(i)] = it->second;
  }
  if (sites.size() < 3) {
    throw std::invalid_argument("delaunay_edges: need at least 3 distinct sites");
  }

  const auto site_edges = triangulate(sites);

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const int si = site_of[static_cast<size_t>(i)];
      const int sj = site_of[static_cast<size_t>(j)];
      const bool linked = (si == sj) || site_edges.count(std::minmax(si, sj)) > 0;
      if (linked) {
        w(i, j) = 1.0;
        w(j, i) = 1.0;
      }
    }
  }
  return SpatialWeights(std::move(w), WeightsKind::delaunay, false);
}

}  // namespace geoling
