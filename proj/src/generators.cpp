#include "coarse/generators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <set>
#include <string>

namespace coarse {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "empty range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

Window gen_grid(int d, int n, int margin) {
  if (d < 1 || d > 3) throw Error(ErrorCode::kInvalidArgument, "grid dimension must be 1, 2 or 3");
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "grid side must be at least 3");
  if (margin < 0) throw Error(ErrorCode::kInvalidArgument, "negative margin");
  if (2 * margin >= n) throw Error(ErrorCode::kMarginTooLarge, "margin leaves an empty core");
  std::vector<Point> pts;
  VertexSet core;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Point p(static_cast<std::size_t>(d));
    std::size_t rest = idx;
    // Last coordinate varies fastest.
    for (int i = d - 1; i >= 0; --i) {
      p[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    bool inner = std::all_of(p.begin(), p.end(),
                             [&](std::int64_t c) { return c >= margin && c <= n - 1 - margin; });
    if (inner) core.push_back(static_cast<Vertex>(idx));
    pts.push_back(std::move(p));
  }
  return Window(Net::from_points(std::move(pts), 1), std::move(core));
}

namespace {

// Breadth-first enumeration of a rooted tree given a child-count rule.
Window tree_window(int depth, int margin, const std::function<int(int, int)>& children) {
  if (depth < 0) throw Error(ErrorCode::kInvalidArgument, "negative depth");
  if (margin < 0) throw Error(ErrorCode::kInvalidArgument, "negative margin");
  if (margin > depth) throw Error(ErrorCode::kMarginTooLarge, "margin exceeds depth");
  std::vector<WeightedEdge> edges;
  std::vector<int> level{0};
  std::vector<int> last_letter{-1};
  VertexSet core{0};
  for (std::size_t i = 0; i < level.size(); ++i) {
    if (level[i] == depth) continue;
    const int kids = children(level[i], last_letter[i]);
    for (int c = 0; c < kids; ++c) {
      const auto id = static_cast<Vertex>(level.size());
      level.push_back(level[i] + 1);
      last_letter.push_back(c);
      edges.push_back({static_cast<Vertex>(i), id, 1});
      if (level.back() <= depth - margin) core.push_back(id);
    }
  }
  return Window(Net::from_edges(level.size(), std::move(edges), 1), std::move(core));
}

}  // namespace

Window gen_free_group_ball(int rank, int radius, int margin) {
  if (rank < 2) throw Error(ErrorCode::kInvalidArgument, "rank must be at least 2");
  if (radius < 1) throw Error(ErrorCode::kInvalidArgument, "radius must be at least 1");
  // Letters 0..2 rank-1, inverse pairs (2i, 2i+1). A word extends by every
  // letter except the inverse of its last one; children are listed in letter
  // order, so children(level, c) only needs the count.
  return tree_window(radius, margin, [rank](int level, int) { return level == 0 ? 2 * rank : 2 * rank - 1; });
}

Window gen_regular_tree_ball(int valence, int depth, int margin) {
  if (valence < 3) throw Error(ErrorCode::kInvalidArgument, "valence must be at least 3");
  return tree_window(depth, margin, [valence](int level, int) { return level == 0 ? valence : valence - 1; });
}

Window gen_random_regular(int d, int n, std::uint64_t seed, double core_fraction,
                          RandomRegularInfo* info) {
  if (d < 1 || n <= d || (static_cast<long>(d) * n) % 2 != 0)
    throw Error(ErrorCode::kInvalidArgument, "need d >= 1, n > d and d n even");
  if (!(core_fraction > 0.0)) throw Error(ErrorCode::kInvalidArgument, "core fraction must be positive");
  std::mt19937_64 rng(seed);
  constexpr int kMaxAttempts = 10000;
  std::vector<WeightedEdge> edges;
  int attempt = 0;
  for (;;) {
    if (++attempt > kMaxAttempts)
      throw Error(ErrorCode::kGenerationFailed,
                  "no simple graph after " + std::to_string(kMaxAttempts) + " pairings");
    std::vector<Vertex> stubs;
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < d; ++k) stubs.push_back(v);
    seeded_shuffle(stubs, rng);
    std::set<std::pair<Vertex, Vertex>> seen;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      auto e = std::minmax(stubs[i], stubs[i + 1]);
      if (e.first == e.second || !seen.insert(e).second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    edges.clear();
    for (auto [u, v] : seen) edges.push_back({u, v, 1});
    break;
  }
  Net net = Net::from_edges(static_cast<std::size_t>(n), std::move(edges), 1);

  // Breadth-first order from vertex 0; unreachable vertices follow by id.
  std::vector<Vertex> order;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int start = 0; start < n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::deque<Vertex> q{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!q.empty()) {
      Vertex x = q.front();
      q.pop_front();
      order.push_back(x);
      for (auto [y, len] : net.adjacency()[static_cast<std::size_t>(x)])
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          q.push_back(y);
        }
    }
  }
  std::size_t k = core_fraction >= 1.0
                      ? static_cast<std::size_t>(n)
                      : static_cast<std::size_t>(std::ceil(core_fraction * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, static_cast<std::size_t>(n));
  if (info) {
    info->attempts = attempt;
    info->connected = net.connected();
  }
  return Window(net, VertexSet(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)));
}

ProductDouble gen_product_double(const Window& w) {
  const Net& base = w.net();
  const std::size_t n = base.size();
  const Dist r0 = base.r0();
  Net net = [&] {
    if (base.mode() == MetricMode::kLattice) {
      std::vector<Point> pts;
      for (int i = 0; i < 2; ++i)
        for (std::size_t x = 0; x < n; ++x) {
          Point p = base.point(static_cast<Vertex>(x));
          p.push_back(i * r0);
          pts.push_back(std::move(p));
        }
      return Net::from_points(std::move(pts), r0);
    }
    std::vector<WeightedEdge> edges;
    const auto shift = static_cast<Vertex>(n);
    for (const auto& e : base.edges()) {
      edges.push_back(e);
      edges.push_back({e.u + shift, e.v + shift, e.length});
    }
    for (std::size_t x = 0; x < n; ++x)
      edges.push_back({static_cast<Vertex>(x), static_cast<Vertex>(x) + shift, r0});
    return Net::from_edges(2 * n, std::move(edges), r0);
  }();
  VertexSet core;
  for (Vertex x : w.core()) core.push_back(x);
  for (Vertex x : w.core()) core.push_back(x + static_cast<Vertex>(n));
  std::vector<Vertex> proj(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) proj[i] = static_cast<Vertex>(i % n);
  CoarseMap p(net, base, std::move(proj));
  return {Window(net, std::move(core)), std::move(p)};
}

Window net_from_points(std::vector<Point> points, Dist r0, std::int64_t margin) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, "no points");
  const std::size_t dim = points.front().size();
  Point lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    if (p.size() != dim) throw Error(ErrorCode::kInvalidArgument, "points of mixed dimension");
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  VertexSet core;
  for (std::size_t v = 0; v < points.size(); ++v) {
    bool inner = true;
    for (std::size_t i = 0; i < dim; ++i)
      if (points[v][i] < lo[i] + margin || points[v][i] > hi[i] - margin) inner = false;
    if (inner) core.push_back(static_cast<Vertex>(v));
  }
  if (core.empty()) throw Error(ErrorCode::kMarginTooLarge, "margin leaves an empty core");
  return Window(Net::from_points(std::move(points), r0), std::move(core));
}

}  // namespace coarse
