#include "coarse/net.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <set>

namespace coarse {

namespace detail {

struct NetData {
  MetricMode mode = MetricMode::kEdges;
  std::size_t n = 0;
  Dist r0 = 1;
  std::size_t dim = 0;
  std::vector<Point> points;
  std::vector<WeightedEdge> edges;
  std::vector<std::vector<std::pair<Vertex, Dist>>> adj;
  bool connected = true;
  std::vector<std::string> warnings;

  mutable std::mutex cache_mutex;
  mutable std::vector<std::shared_ptr<const std::vector<Dist>>> rows;
};

}  // namespace detail

namespace {

Dist l1(const Point& a, const Point& b) {
  Dist d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return d;
}

// Dijkstra from a set of sources, truncated at `limit`. Returns (vertex, dist)
// for every vertex reached.
std::vector<std::pair<Vertex, Dist>> bounded_dijkstra(
    const detail::NetData& d, std::span<const Vertex> sources, Dist limit) {
  std::map<Vertex, Dist> best;
  using Item = std::pair<Dist, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (Vertex s : sources) {
    best[s] = 0;
    pq.emplace(0, s);
  }
  std::vector<std::pair<Vertex, Dist>> out;
  std::set<Vertex> done;
  while (!pq.empty()) {
    auto [dist, x] = pq.top();
    pq.pop();
    if (!done.insert(x).second) continue;
    out.emplace_back(x, dist);
    for (auto [y, len] : d.adj[static_cast<std::size_t>(x)]) {
      Dist nd = dist + len;
      if (nd > limit) continue;
      auto it = best.find(y);
      if (it == best.end() || nd < it->second) {
        best[y] = nd;
        pq.emplace(nd, y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Dist> full_row(const detail::NetData& d, Vertex x) {
  std::vector<Dist> row(d.n, kInfDist);
  if (d.mode == MetricMode::kLattice) {
    const Point& p = d.points[static_cast<std::size_t>(x)];
    for (std::size_t y = 0; y < d.n; ++y) row[y] = l1(p, d.points[y]);
    return row;
  }
  using Item = std::pair<Dist, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  row[static_cast<std::size_t>(x)] = 0;
  pq.emplace(0, x);
  while (!pq.empty()) {
    auto [dist, u] = pq.top();
    pq.pop();
    if (dist > row[static_cast<std::size_t>(u)]) continue;
    for (auto [v, len] : d.adj[static_cast<std::size_t>(u)]) {
      Dist nd = dist + len;
      if (nd < row[static_cast<std::size_t>(v)]) {
        row[static_cast<std::size_t>(v)] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  return row;
}

}  // namespace

const char* metric_mode_name(MetricMode mode) {
  return mode == MetricMode::kEdges ? "edges" : "lattice";
}

Net::Net(std::shared_ptr<detail::NetData> data) : data_(std::move(data)) {}

Net Net::from_edges(std::size_t n, std::vector<WeightedEdge> edges, Dist r0) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "net must have at least one vertex");
  if (r0 < 1) throw Error(ErrorCode::kInvalidArgument, "discreteness radius must be positive");
  auto d = std::make_shared<detail::NetData>();
  d->mode = MetricMode::kEdges;
  d->n = n;
  d->r0 = r0;
  std::map<std::pair<Vertex, Vertex>, Dist> canon;
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n)
      throw Error(ErrorCode::kUnknownVertex,
                  "edge " + std::to_string(e.u) + "-" + std::to_string(e.v));
    if (e.u == e.v) throw Error(ErrorCode::kInvalidArgument, "self-loop at " + std::to_string(e.u));
    if (e.length < 1) throw Error(ErrorCode::kInvalidArgument, "edge lengths must be positive integers");
    if (e.length < r0)
      throw Error(ErrorCode::kDiscretenessViolation,
                  "edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " shorter than r0");
    auto key = std::minmax(e.u, e.v);
    auto it = canon.find(key);
    if (it == canon.end() || e.length < it->second) canon[key] = e.length;
  }
  d->adj.assign(n, {});
  for (auto [key, len] : canon) {
    d->edges.push_back({key.first, key.second, len});
    d->adj[static_cast<std::size_t>(key.first)].emplace_back(key.second, len);
    d->adj[static_cast<std::size_t>(key.second)].emplace_back(key.first, len);
  }
  for (auto& a : d->adj) std::sort(a.begin(), a.end());

  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (auto [y, len] : d->adj[static_cast<std::size_t>(x)]) {
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = 1;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  d->connected = reached == n;
  if (!d->connected)
    d->warnings.push_back("DisconnectedWithExplicitEdges: " + std::to_string(reached) + " of " +
                          std::to_string(n) + " vertices reachable from vertex 0");
  if (n <= kDenseCacheCap) d->rows.resize(n);
  return Net(std::move(d));
}

Net Net::from_points(std::vector<Point> points, Dist r0) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "net must have at least one vertex");
  if (r0 < 1) throw Error(ErrorCode::kInvalidArgument, "discreteness radius must be positive");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw Error(ErrorCode::kInvalidArgument, "lattice points of mixed dimension");
  {
    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
      if (points[order[i]] == points[order[i - 1]])
        throw Error(ErrorCode::kDuplicatePoint,
                    "vertices " + std::to_string(order[i - 1]) + " and " + std::to_string(order[i]));
  }
  if (r0 > 1) {
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j)
        if (l1(points[i], points[j]) < r0)
          throw Error(ErrorCode::kDiscretenessViolation,
                      "vertices " + std::to_string(i) + " and " + std::to_string(j) +
                          " closer than r0");
  }
  auto d = std::make_shared<detail::NetData>();
  d->mode = MetricMode::kLattice;
  d->n = points.size();
  d->r0 = r0;
  d->dim = dim;
  d->points = std::move(points);
  if (d->n <= kDenseCacheCap) d->rows.resize(d->n);
  return Net(std::move(d));
}

std::size_t Net::size() const { return data_->n; }
MetricMode Net::mode() const { return data_->mode; }
Dist Net::r0() const { return data_->r0; }
std::size_t Net::dimension() const { return data_->dim; }
const Point& Net::point(Vertex x) const {
  check_vertex(x);
  return data_->points.at(static_cast<std::size_t>(x));
}
const std::vector<WeightedEdge>& Net::edges() const { return data_->edges; }
const std::vector<std::vector<std::pair<Vertex, Dist>>>& Net::adjacency() const {
  return data_->adj;
}
bool Net::connected() const { return data_->connected; }
const std::vector<std::string>& Net::warnings() const { return data_->warnings; }

void Net::check_vertex(Vertex x) const {
  if (!contains(x)) throw Error(ErrorCode::kUnknownVertex, "vertex " + std::to_string(x));
}

std::shared_ptr<const std::vector<Dist>> Net::cached_row(Vertex x) const {
  const auto ux = static_cast<std::size_t>(x);
  if (data_->rows.empty()) return std::make_shared<const std::vector<Dist>>(full_row(*data_, x));
  {
    std::lock_guard lock(data_->cache_mutex);
    if (data_->rows[ux]) return data_->rows[ux];
  }
  auto row = std::make_shared<const std::vector<Dist>>(full_row(*data_, x));
  std::lock_guard lock(data_->cache_mutex);
  if (!data_->rows[ux]) data_->rows[ux] = row;
  return data_->rows[ux];
}

Dist Net::distance(Vertex x, Vertex y) const {
  check_vertex(x);
  check_vertex(y);
  if (x == y) return 0;
  if (data_->mode == MetricMode::kLattice)
    return l1(data_->points[static_cast<std::size_t>(x)], data_->points[static_cast<std::size_t>(y)]);
  return (*cached_row(x))[static_cast<std::size_t>(y)];
}

std::vector<Dist> Net::distances_from(Vertex x) const {
  check_vertex(x);
  return *cached_row(x);
}

std::vector<std::pair<Vertex, Dist>> Net::ball_with_distances(Vertex x, Dist r) const {
  check_vertex(x);
  if (r < 0) throw Error(ErrorCode::kInvalidArgument, "negative radius");
  std::vector<std::pair<Vertex, Dist>> out;
  if (data_->mode == MetricMode::kLattice) {
    const Point& p = data_->points[static_cast<std::size_t>(x)];
    for (std::size_t y = 0; y < data_->n; ++y) {
      Dist dist = l1(p, data_->points[y]);
      if (dist <= r) out.emplace_back(static_cast<Vertex>(y), dist);
    }
    return out;
  }
  const Vertex src[] = {x};
  return bounded_dijkstra(*data_, src, r);
}

bool Net::same_space(const Net& other) const {
  if (data_ == other.data_) return true;
  const auto& a = *data_;
  const auto& b = *other.data_;
  return a.mode == b.mode && a.n == b.n && a.r0 == b.r0 && a.points == b.points &&
         a.edges == b.edges;
}

Window::Window(Net net, VertexSet core) : net_(std::move(net)), core_(make_set(std::move(core))) {
  if (core_.empty()) throw Error(ErrorCode::kInvalidArgument, "window core must be nonempty");
  in_core_.assign(net_.size(), 0);
  for (Vertex x : core_) {
    net_.check_vertex(x);
    in_core_[static_cast<std::size_t>(x)] = 1;
  }
}

Window Window::full(Net net) {
  VertexSet all(net.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Vertex>(i);
  return Window(std::move(net), std::move(all));
}

VertexSet Window::frame() const {
  VertexSet out;
  for (std::size_t i = 0; i < in_core_.size(); ++i)
    if (!in_core_[i]) out.push_back(static_cast<Vertex>(i));
  return out;
}

Dist Window::margin() const {
  VertexSet fr = frame();
  if (fr.empty()) return kInfDist;
  std::vector<Dist> dist = distances_to_set(net_, fr);
  Dist best = kInfDist;
  for (Vertex x : core_) best = std::min(best, dist[static_cast<std::size_t>(x)]);
  return best;
}

std::size_t GeometryProfile::at(Dist r) const {
  if (r < 0 || r > r_max()) throw Error(ErrorCode::kInvalidArgument, "radius outside profile");
  return max_ball[static_cast<std::size_t>(r)];
}

std::size_t ScaleGraph::max_degree() const {
  std::size_t best = 0;
  for (const auto& a : adjacency) best = std::max(best, a.size());
  return best;
}

VertexSet make_set(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Dist> distances_to_set(const Net& net, std::span<const Vertex> s) {
  std::vector<Dist> dist(net.size(), kInfDist);
  for (Vertex x : s) net.check_vertex(x);
  if (net.mode() == MetricMode::kLattice) {
    for (std::size_t y = 0; y < net.size(); ++y)
      for (Vertex x : s) dist[y] = std::min(dist[y], net.distance(static_cast<Vertex>(y), x));
    return dist;
  }
  using Item = std::pair<Dist, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (Vertex x : s) {
    dist[static_cast<std::size_t>(x)] = 0;
    pq.emplace(0, x);
  }
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (auto [v, len] : net.adjacency()[static_cast<std::size_t>(u)]) {
      if (d + len < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = d + len;
        pq.emplace(d + len, v);
      }
    }
  }
  return dist;
}

VertexSet ball(const Net& net, Vertex x, Dist r) {
  VertexSet out;
  for (auto [y, d] : net.ball_with_distances(x, r)) out.push_back(y);
  return out;
}

VertexSet neighborhood(const Net& net, std::span<const Vertex> s, Dist r) {
  if (r < 0) throw Error(ErrorCode::kInvalidArgument, "negative radius");
  for (Vertex x : s) net.check_vertex(x);
  if (r == 0 || s.empty()) return make_set({s.begin(), s.end()});
  if (net.mode() == MetricMode::kLattice) {
    std::vector<char> hit(net.size(), 0);
    for (Vertex x : s)
      for (auto [y, d] : net.ball_with_distances(x, r)) hit[static_cast<std::size_t>(y)] = 1;
    VertexSet out;
    for (std::size_t i = 0; i < hit.size(); ++i)
      if (hit[i]) out.push_back(static_cast<Vertex>(i));
    return out;
  }
  // Multi-source truncated search; all sources start at distance 0.
  std::vector<Dist> dist(net.size(), kInfDist);
  using Item = std::pair<Dist, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (Vertex x : s) {
    dist[static_cast<std::size_t>(x)] = 0;
    pq.emplace(0, x);
  }
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (auto [v, len] : net.adjacency()[static_cast<std::size_t>(u)]) {
      Dist nd = d + len;
      if (nd <= r && nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        pq.emplace(nd, v);
      }
    }
  }
  VertexSet out;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] <= r) out.push_back(static_cast<Vertex>(i));
  return out;
}

VertexSet boundary(const Net& net, std::span<const Vertex> s, Dist r) {
  VertexSet n = neighborhood(net, s, r);
  VertexSet in = make_set({s.begin(), s.end()});
  VertexSet out;
  std::set_difference(n.begin(), n.end(), in.begin(), in.end(), std::back_inserter(out));
  return out;
}

ScaleGraph rips_graph(const Net& net, Dist l) {
  ScaleGraph g;
  g.scale = l;
  g.adjacency.assign(net.size(), {});
  g.below_discreteness = l < net.r0();
  if (l < 1) return g;
  for (std::size_t x = 0; x < net.size(); ++x) {
    for (auto [y, d] : net.ball_with_distances(static_cast<Vertex>(x), l)) {
      if (static_cast<std::size_t>(y) == x) continue;
      g.adjacency[x].push_back(y);
      if (static_cast<std::size_t>(y) > x) ++g.edge_count;
    }
  }
  return g;
}

GeometryProfile geometry_profile(const Net& net, Dist r_max) {
  if (r_max < 0) throw Error(ErrorCode::kInvalidArgument, "negative radius");
  GeometryProfile p;
  p.max_ball.assign(static_cast<std::size_t>(r_max) + 1, 0);
  std::vector<std::size_t> hist(static_cast<std::size_t>(r_max) + 1);
  for (std::size_t x = 0; x < net.size(); ++x) {
    std::fill(hist.begin(), hist.end(), 0);
    for (auto [y, d] : net.ball_with_distances(static_cast<Vertex>(x), r_max))
      ++hist[static_cast<std::size_t>(d)];
    std::size_t acc = 0;
    for (std::size_t r = 0; r < hist.size(); ++r) {
      acc += hist[r];
      p.max_ball[r] = std::max(p.max_ball[r], acc);
    }
  }
  return p;
}

}  // namespace coarse
