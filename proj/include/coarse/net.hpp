#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coarse/types.hpp"

namespace coarse {

enum class MetricMode { kEdges, kLattice };

const char* metric_mode_name(MetricMode mode);

struct WeightedEdge {
  Vertex u = 0;
  Vertex v = 0;
  Dist length = 1;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

using Point = std::vector<std::int64_t>;

namespace detail {
struct NetData;
}

// Finite, uniformly discrete metric space with integer distances. Either the
// shortest-path metric of a positively weighted graph or the L1 metric on
// integer lattice points. Immutable; copies share storage and the distance
// cache.
class Net {
 public:
  // Rows of the distance table are memoized when the net has at most this many
  // vertices; larger nets recompute rows on demand.
  static constexpr std::size_t kDenseCacheCap = 4096;

  static Net from_edges(std::size_t n, std::vector<WeightedEdge> edges, Dist r0);
  static Net from_points(std::vector<Point> points, Dist r0);

  std::size_t size() const;
  MetricMode mode() const;
  Dist r0() const;
  std::size_t dimension() const;
  const Point& point(Vertex x) const;
  // Canonical edge list: u < v, sorted, parallel edges collapsed to the
  // shortest one.
  const std::vector<WeightedEdge>& edges() const;
  // Scale-free adjacency of the explicit edge list (empty in lattice mode).
  const std::vector<std::vector<std::pair<Vertex, Dist>>>& adjacency() const;

  bool contains(Vertex x) const { return x >= 0 && static_cast<std::size_t>(x) < size(); }
  void check_vertex(Vertex x) const;

  Dist distance(Vertex x, Vertex y) const;
  // Full distance row from x. Entries are kInfDist across components.
  std::vector<Dist> distances_from(Vertex x) const;
  // Vertices within distance r of x together with their distances, sorted by
  // vertex id.
  std::vector<std::pair<Vertex, Dist>> ball_with_distances(Vertex x, Dist r) const;

  bool connected() const;
  const std::vector<std::string>& warnings() const;

  bool same_space(const Net& other) const;

 private:
  explicit Net(std::shared_ptr<detail::NetData> data);
  std::shared_ptr<const std::vector<Dist>> cached_row(Vertex x) const;

  std::shared_ptr<detail::NetData> data_;
};

// Net whose vertices are split into a core, where every quantifier ranges, and
// an absorbing frame standing in for the unbounded complement.
class Window {
 public:
  Window(Net net, VertexSet core);
  static Window full(Net net);

  const Net& net() const { return net_; }
  std::size_t size() const { return net_.size(); }
  const VertexSet& core() const { return core_; }
  VertexSet frame() const;
  bool in_core(Vertex x) const { return in_core_[static_cast<std::size_t>(x)] != 0; }
  // min over core x of d(x, frame); kInfDist when the frame is empty.
  Dist margin() const;

 private:
  Net net_;
  VertexSet core_;
  std::vector<char> in_core_;
};

struct GeometryProfile {
  // max_ball[r] = max over x of |B_r(x)|, for r = 0..r_max.
  std::vector<std::size_t> max_ball;

  Dist r_max() const { return static_cast<Dist>(max_ball.size()) - 1; }
  std::size_t at(Dist r) const;
  // Max degree of the scale-l graph, N_l - 1.
  std::size_t scale_degree(Dist l) const { return at(l) - 1; }
};

// 1-skeleton of the Rips complex at scale l.
struct ScaleGraph {
  Dist scale = 1;
  std::vector<VertexSet> adjacency;
  std::size_t edge_count = 0;
  bool below_discreteness = false;

  std::size_t max_degree() const;
  std::size_t degree(Vertex x) const { return adjacency[static_cast<std::size_t>(x)].size(); }
};

VertexSet ball(const Net& net, Vertex x, Dist r);
VertexSet neighborhood(const Net& net, std::span<const Vertex> s, Dist r);
VertexSet boundary(const Net& net, std::span<const Vertex> s, Dist r);
// d(x, S) for every vertex x; kInfDist when unreachable or S is empty.
std::vector<Dist> distances_to_set(const Net& net, std::span<const Vertex> s);
ScaleGraph rips_graph(const Net& net, Dist l);
GeometryProfile geometry_profile(const Net& net, Dist r_max);

// Sorted, deduplicated copy.
VertexSet make_set(std::vector<Vertex> v);

}  // namespace coarse
