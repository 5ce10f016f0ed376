#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geocascade/config.hpp"
#include "geocascade/errors.hpp"
#include "geocascade/random.hpp"

namespace geocascade {

using NodeId = std::uint32_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Undirected graph on points in the plane, adjacency stored as sorted CSR
/// neighbor lists. Immutable after construction.
class Graph {
 public:
  Graph() : offsets_{0} {}

  /// Connects every pair of points closer than `radius` (strict).
  Graph(std::vector<Point> positions, double radius)
      : positions_(std::move(positions)), radius_(radius) {
    detail::require(radius > 0.0, "Graph: radius must be > 0");
    build_by_grid();
  }

  /// Builds a graph from an explicit undirected edge list.
  static Graph from_edges(std::vector<Point> positions,
                          std::span<const std::pair<NodeId, NodeId>> edges,
                          double radius = std::numeric_limits<double>::quiet_NaN()) {
    Graph g;
    g.positions_ = std::move(positions);
    g.radius_ = radius;
    const std::size_t n = g.positions_.size();
    std::vector<std::vector<NodeId>> lists(n);
    for (auto [u, v] : edges) {
      detail::require(u < n && v < n, "Graph: edge endpoint out of range");
      detail::require(u != v, "Graph: self-loops are not allowed");
      lists[u].push_back(v);
      lists[v].push_back(u);
    }
    g.assemble(lists);
    return g;
  }

  std::size_t node_count() const { return positions_.size(); }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  double connection_radius() const { return radius_; }
  std::span<const Point> positions() const { return positions_; }
  const Point& position(std::size_t v) const { return positions_[v]; }

  std::span<const NodeId> neighbors(std::size_t v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }

 private:
  void build_by_grid() {
    const std::size_t n = positions_.size();
    if (n == 0) {
      offsets_.assign(1, 0);
      return;
    }
    double min_x = positions_[0].x, max_x = min_x;
    double min_y = positions_[0].y, max_y = min_y;
    for (const auto& p : positions_) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    // Cells must be at least `radius` wide for the 3x3 search to be exact;
    // widen them when the radius is tiny relative to the extent.
    const double extent = std::max(max_x - min_x, max_y - min_y);
    const double per_axis = std::ceil(std::sqrt(double(n))) + 1.0;
    const double cell = std::max(radius_, extent / per_axis);
    const auto nx = std::size_t(std::floor((max_x - min_x) / cell)) + 1;
    const auto ny = std::size_t(std::floor((max_y - min_y) / cell)) + 1;

    auto cell_of = [&](const Point& p) {
      const auto cx = std::min(std::size_t((p.x - min_x) / cell), nx - 1);
      const auto cy = std::min(std::size_t((p.y - min_y) / cell), ny - 1);
      return std::pair{cx, cy};
    };

    // Counting sort of node ids into cells.
    std::vector<std::uint32_t> cell_start(nx * ny + 1, 0);
    std::vector<std::size_t> cell_index(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto [cx, cy] = cell_of(positions_[i]);
      cell_index[i] = cy * nx + cx;
      ++cell_start[cell_index[i] + 1];
    }
    for (std::size_t c = 0; c < nx * ny; ++c) cell_start[c + 1] += cell_start[c];
    std::vector<NodeId> cell_members(n);
    {
      auto fill = cell_start;
      for (std::size_t i = 0; i < n; ++i) cell_members[fill[cell_index[i]]++] = NodeId(i);
    }

    const double r2 = radius_ * radius_;
    offsets_.assign(n + 1, 0);
    adjacency_.clear();
    adjacency_.reserve(n * 8);
    std::vector<NodeId> scratch;
    for (std::size_t i = 0; i < n; ++i) {
      scratch.clear();
      auto [cx, cy] = cell_of(positions_[i]);
      const std::size_t x0 = cx == 0 ? 0 : cx - 1, x1 = std::min(cx + 1, nx - 1);
      const std::size_t y0 = cy == 0 ? 0 : cy - 1, y1 = std::min(cy + 1, ny - 1);
      for (std::size_t y = y0; y <= y1; ++y) {
        for (std::size_t x = x0; x <= x1; ++x) {
          const std::size_t c = y * nx + x;
          for (std::uint32_t k = cell_start[c]; k < cell_start[c + 1]; ++k) {
            const NodeId j = cell_members[k];
            if (j != i && squared_distance(positions_[i], positions_[j]) < r2) scratch.push_back(j);
          }
        }
      }
      std::sort(scratch.begin(), scratch.end());
      adjacency_.insert(adjacency_.end(), scratch.begin(), scratch.end());
      offsets_[i + 1] = adjacency_.size();
    }
  }

  void assemble(std::vector<std::vector<NodeId>>& lists) {
    offsets_.assign(lists.size() + 1, 0);
    adjacency_.clear();
    for (std::size_t i = 0; i < lists.size(); ++i) {
      auto& l = lists[i];
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
      adjacency_.insert(adjacency_.end(), l.begin(), l.end());
      offsets_[i + 1] = adjacency_.size();
    }
  }

  std::vector<Point> positions_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  double radius_ = std::numeric_limits<double>::quiet_NaN();
};

/// Poisson point process of density lambda on the disk of diameter D.
inline std::vector<Point> sample_positions(const NetworkConfig& config, Rng& rng) {
  const double radius = config.region_radius();
  const auto n = rng.poisson(config.lambda * config.region_area());
  std::vector<Point> points;
  points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double r = radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    points.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return points;
}

inline Graph sample_graph(const NetworkConfig& config, Rng& rng) {
  validate(config);
  return Graph(sample_positions(config, rng), config.R);
}

inline Graph sample_graph(const NetworkConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  return sample_graph(config, rng);
}

/// True iff the graph has at most one connected component.
inline bool is_connected(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

/// Expected node count in ring i, the annulus between Ra + (i-1)R and Ra + iR.
inline double ring_mean(const NetworkConfig& config, int i) {
  detail::require(i >= 1, "ring_mean: ring index must be >= 1");
  const double outer = config.Ra + i * config.R;
  const double inner = config.Ra + (i - 1) * config.R;
  return config.lambda * std::numbers::pi * (outer * outer - inner * inner);
}

// Text snapshot: "id x y" per node, then "edge u v" per edge (u < v).
// Lines starting with '#' are comments.
inline void write_graph(std::ostream& out, const Graph& g) {
  out << "# geocascade graph nodes=" << g.node_count() << " edges=" << g.edge_count();
  if (std::isfinite(g.connection_radius())) {
    out << " radius=" << std::setprecision(17) << g.connection_radius();
  }
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    out << i << ' ' << g.position(i).x << ' ' << g.position(i).y << '\n';
  }
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      if (u < v) out << "edge " << u << ' ' << v << '\n';
    }
  }
}

inline Graph read_graph(std::istream& in) {
  std::vector<std::pair<std::size_t, Point>> nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;
  double radius = std::numeric_limits<double>::quiet_NaN();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line[0] == '#') {
      std::string token;
      while (fields >> token) {
        if (token.rfind("radius=", 0) == 0) radius = std::stod(token.substr(7));
      }
      continue;
    }
    const auto bad = [&] {
      return ParameterDomainError("read_graph: malformed line " + std::to_string(line_no));
    };
    if (line.rfind("edge", 0) == 0) {
      std::string tag;
      std::int64_t u = -1, v = -1;
      if (!(fields >> tag >> u >> v) || u < 0 || v < 0) throw bad();
      edges.emplace_back(NodeId(u), NodeId(v));
    } else {
      std::int64_t id = -1;
      Point p;
      if (!(fields >> id >> p.x >> p.y) || id < 0) throw bad();
      nodes.emplace_back(std::size_t(id), p);
    }
  }
  std::sort(nodes.begin(), nodes.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<Point> positions;
  positions.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    detail::require(nodes[i].first == i, "read_graph: node ids must be 0..n-1");
    positions.push_back(nodes[i].second);
  }
  return Graph::from_edges(std::move(positions), edges, radius);
}

}  // namespace geocascade
