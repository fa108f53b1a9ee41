#include "coarse/uf_flow.hpp"

#include <algorithm>
#include <string>

#include "coarse/maxflow.hpp"

namespace coarse {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw Error(ErrorCode::kOverflow, "scaled capacity exceeds 64 bits");
  return out;
}

// Scale-l edges {u, v}, u < v, with at least one endpoint in the core.
std::vector<std::pair<Vertex, Vertex>> core_scale_edges(const Window& w, Dist scale) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex x : w.core()) {
    for (Vertex y : ball(w.net(), x, scale)) {
      if (y == x) continue;
      if (w.in_core(y) && y < x) continue;
      edges.emplace_back(std::min(x, y), std::max(x, y));
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace

const char* chain_mode_name(ChainMode mode) {
  return mode == ChainMode::kInteger ? "integer" : "rational";
}

Chain0 unit_chain(const Window& w) {
  Chain0 c(w.size());
  for (Vertex x : w.core()) c[x] = 1;
  return c;
}

Chain0 boundary_of_flow(const FlowAssignment& b) {
  Chain0 out(b.vertex_count);
  for (const auto& e : b.values) {
    out[e.v] += e.value;
    out[e.u] -= e.value;
  }
  return out;
}

std::size_t cut_edge_count(const Window& w, std::span<const Vertex> s, Dist scale) {
  std::vector<char> in(w.size(), 0);
  for (Vertex x : s) in[static_cast<std::size_t>(x)] = 1;
  std::size_t count = 0;
  for (Vertex x : s)
    for (Vertex y : ball(w.net(), x, scale))
      if (!in[static_cast<std::size_t>(y)]) ++count;
  return count;
}

BoundOutcome bound_certificate(const Chain0& c, Dist scale, std::int64_t cap, const Window& w,
                               ChainMode mode) {
  if (scale < 1) throw Error(ErrorCode::kInvalidArgument, "scale must be positive");
  if (cap < 1) throw Error(ErrorCode::kInvalidArgument, "cap must be at least 1");
  if (c.size() != w.size()) throw Error(ErrorCode::kDomainMismatch, "chain size differs from window");
  for (Vertex x : w.frame())
    if (c[x].numerator() != 0)
      throw Error(ErrorCode::kInvalidArgument,
                  "chain must be supported on the core (vertex " + std::to_string(x) + ")");
  if (mode == ChainMode::kInteger && !c.is_integral())
    throw Error(ErrorCode::kInvalidArgument, "integer mode needs an integral chain");

  const std::int64_t denom = mode == ChainMode::kRational ? c.common_denominator() : 1;
  const std::int64_t scaled_cap = checked_mul(cap, denom);
  const std::size_t n = w.size();
  std::vector<std::int64_t> mass(n, 0);
  std::int64_t total = 0;
  for (Vertex x : w.core()) {
    const Rational& q = c[x];
    mass[static_cast<std::size_t>(x)] = checked_mul(q.numerator(), denom / q.denominator());
    if (__builtin_add_overflow(total, mass[static_cast<std::size_t>(x)], &total))
      throw Error(ErrorCode::kOverflow, "chain mass exceeds 64 bits");
  }

  const auto edges = core_scale_edges(w, scale);
  {
    std::vector<std::size_t> degree(n, 0);
    for (auto [u, v] : edges) {
      ++degree[static_cast<std::size_t>(u)];
      ++degree[static_cast<std::size_t>(v)];
    }
    for (Vertex x : w.core())
      if (mass[static_cast<std::size_t>(x)] > 0 && degree[static_cast<std::size_t>(x)] == 0)
        throw Error(ErrorCode::kScaleTooSmall, "no scale-" + std::to_string(scale) +
                                                   " edge leaves vertex " + std::to_string(x));
  }

  const bool frame_empty = w.core().size() == n;
  auto make_cert = [&](VertexSet s, int sign, ViolationReason reason) {
    ViolationCert cert;
    cert.set = std::move(s);
    cert.chain_sum = c.sum_over(cert.set);
    cert.cut_edges = cut_edge_count(w, cert.set, scale);
    cert.cut_capacity = Rational(cap) * Rational(static_cast<std::int64_t>(cert.cut_edges));
    cert.boundary_size = boundary(w.net(), cert.set, scale).size();
    cert.sign = sign;
    cert.scale = scale;
    cert.cap = cap;
    cert.reason = reason;
    const Rational abs_sum = cert.chain_sum < 0 ? -cert.chain_sum : cert.chain_sum;
    if (!(abs_sum > cert.cut_capacity))
      throw std::logic_error("violation certificate does not violate the cut bound");
    return cert;
  };
  if (frame_empty && total != 0)
    return make_cert(w.core(), total > 0 ? 1 : -1, ViolationReason::kZeroSumRequired);

  // Core vertices keep their ids; the whole frame collapses to one node with
  // free divergence whose net balance is forced to -total.
  const std::size_t source = n, sink = n + 1, frame_node = n + 2;
  FlowNetwork net(n + 3);
  std::int64_t need = 0;
  for (Vertex x : w.core()) {
    const std::int64_t m = mass[static_cast<std::size_t>(x)];
    if (m > 0) {
      net.add_edge(source, static_cast<std::size_t>(x), m);
      need += m;
    } else if (m < 0) {
      net.add_edge(static_cast<std::size_t>(x), sink, -m);
    }
  }
  if (!frame_empty) {
    if (total > 0) net.add_edge(frame_node, sink, total);
    if (total < 0) {
      net.add_edge(source, frame_node, -total);
      need -= total;
    }
  }
  auto node_of = [&](Vertex x) {
    return w.in_core(x) ? static_cast<std::size_t>(x) : frame_node;
  };
  std::vector<std::size_t> arc_of(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i)
    arc_of[i] = net.add_edge(node_of(edges[i].first), node_of(edges[i].second), scaled_cap, scaled_cap);

  const auto value = net.solve(source, sink,
                               mode == ChainMode::kInteger ? FlowAlgorithm::kDinic
                                                           : FlowAlgorithm::kEdmondsKarp);
  if (value == need) {
    FlowAssignment b;
    b.scale = scale;
    b.cap = cap;
    b.vertex_count = n;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      // Network flow runs from surplus to deficit; b is its reversal.
      const std::int64_t g = net.flow(arc_of[i]);
      if (g != 0) b.values.push_back({edges[i].first, edges[i].second, Rational(-g, denom)});
    }
    return b;
  }

  const auto side = net.source_side();
  VertexSet s;
  if (!side[frame_node]) {
    for (Vertex x : w.core())
      if (side[static_cast<std::size_t>(x)]) s.push_back(x);
    return make_cert(std::move(s), 1, ViolationReason::kCut);
  }
  for (Vertex x : w.core())
    if (!side[static_cast<std::size_t>(x)]) s.push_back(x);
  return make_cert(std::move(s), -1, ViolationReason::kCut);
}

bool verify_flow(const FlowAssignment& b, const Chain0& c, const Window& w) {
  if (b.vertex_count != w.size() || c.size() != w.size()) return false;
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    const auto& e = b.values[i];
    if (!w.net().contains(e.u) || !w.net().contains(e.v) || e.u >= e.v) return false;
    if (i > 0 && std::pair(b.values[i - 1].u, b.values[i - 1].v) >= std::pair(e.u, e.v)) return false;
    if (w.net().distance(e.u, e.v) > b.scale) return false;
    const Rational mag = e.value < 0 ? -e.value : e.value;
    if (mag > Rational(b.cap)) return false;
  }
  const Chain0 db = boundary_of_flow(b);
  for (Vertex x : w.core())
    if (db[x] != c[x]) return false;
  return true;
}

bool verify_violation(const ViolationCert& cert, const Chain0& c, const Window& w) {
  if (c.size() != w.size() || cert.set.empty()) return false;
  for (std::size_t i = 0; i < cert.set.size(); ++i) {
    const Vertex x = cert.set[i];
    if (!w.net().contains(x) || !w.in_core(x)) return false;
    if (i > 0 && cert.set[i - 1] >= x) return false;
  }
  const Rational sum = c.sum_over(cert.set);
  const std::size_t cut = cut_edge_count(w, cert.set, cert.scale);
  const Rational capacity = Rational(cert.cap) * Rational(static_cast<std::int64_t>(cut));
  if (sum != cert.chain_sum || cut != cert.cut_edges || capacity != cert.cut_capacity) return false;
  if (boundary(w.net(), cert.set, cert.scale).size() != cert.boundary_size) return false;
  if ((sum < 0 ? -1 : 1) != cert.sign) return false;
  return (sum < 0 ? -sum : sum) > capacity;
}

VanishingResult vanishing_test(const Window& w, Dist scale, std::int64_t cap_max) {
  if (cap_max < 1) throw Error(ErrorCode::kInvalidArgument, "cap_max must be at least 1");
  const Chain0 c = unit_chain(w);
  BoundOutcome top = bound_certificate(c, scale, cap_max, w);
  if (std::holds_alternative<ViolationCert>(top)) return {std::nullopt, std::move(top)};
  std::int64_t lo = 0, hi = cap_max;  // lo infeasible (or 0), hi feasible
  BoundOutcome best = std::move(top);
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    BoundOutcome o = bound_certificate(c, scale, mid, w);
    if (std::holds_alternative<FlowAssignment>(o)) {
      hi = mid;
      best = std::move(o);
    } else {
      lo = mid;
    }
  }
  return {hi, std::move(best)};
}

bool is_positive_chain(const Chain0& c, const Window& w, Dist density_radius) {
  if (c.size() != w.size() || density_radius < 0) return false;
  VertexSet positive;
  for (Vertex x : w.core()) {
    if (c[x] < 0) return false;
    if (c[x] > 0) positive.push_back(x);
  }
  if (positive.empty()) return false;
  const std::vector<Dist> dist = distances_to_set(w.net(), positive);
  for (Vertex x : w.core())
    if (dist[static_cast<std::size_t>(x)] > density_radius) return false;
  return true;
}

PositiveRealization realize_positive_class(const Window& w, const Chain0& c, Dist density_radius) {
  if (!c.is_integral() || !is_positive_chain(c, w, density_radius))
    throw Error(ErrorCode::kNotPositive,
                "chain is not nonnegative and positive on a " + std::to_string(density_radius) +
                    "-dense set of the core");
  for (Vertex x : w.frame())
    if (c[x].numerator() != 0) throw Error(ErrorCode::kNotPositive, "chain has mass on the frame");

  const Net& base = w.net();
  const Dist r0 = base.r0();
  std::vector<std::pair<Vertex, std::int64_t>> labels;
  std::vector<std::size_t> offset(base.size() + 1, 0);
  for (std::size_t x = 0; x < base.size(); ++x) {
    const std::int64_t k = c[static_cast<Vertex>(x)].numerator();
    offset[x + 1] = offset[x] + static_cast<std::size_t>(k);
    for (std::int64_t i = 0; i < k; ++i) labels.emplace_back(static_cast<Vertex>(x), i);
  }
  std::vector<Vertex> proj;
  for (auto [x, k] : labels) proj.push_back(x);

  auto make = [&](Net net) {
    CoarseMap p(net, base, proj);
    return PositiveRealization{std::move(net), std::move(p), labels};
  };

  if (base.mode() == MetricMode::kLattice) {
    std::vector<Point> pts;
    for (auto [x, k] : labels) {
      Point p = base.point(x);
      p.push_back(k * r0);
      pts.push_back(std::move(p));
    }
    return make(Net::from_points(std::move(pts), r0));
  }

  auto id = [&](Vertex x, std::int64_t k) {
    return static_cast<Vertex>(offset[static_cast<std::size_t>(x)] + static_cast<std::size_t>(k));
  };
  std::vector<WeightedEdge> edges;
  std::int64_t uniform = c[0].numerator();
  for (std::size_t x = 0; x < base.size(); ++x)
    if (c[static_cast<Vertex>(x)].numerator() != uniform) uniform = -1;
  if (uniform > 0) {
    // Full layers: copy each layer and join consecutive layers by r0-edges.
    for (std::int64_t k = 0; k < uniform; ++k)
      for (const auto& e : base.edges()) edges.push_back({id(e.u, k), id(e.v, k), e.length});
    for (std::size_t x = 0; x < base.size(); ++x)
      for (std::int64_t k = 0; k + 1 < uniform; ++k)
        edges.push_back({id(static_cast<Vertex>(x), k), id(static_cast<Vertex>(x), k + 1), r0});
  } else {
    // Ragged fibers: shortest paths through layers would detour around empty
    // fibers, so the metric is written out as a complete weighted graph.
    for (std::size_t a = 0; a < labels.size(); ++a) {
      const std::vector<Dist> row = base.distances_from(labels[a].first);
      for (std::size_t b = a + 1; b < labels.size(); ++b) {
        const Dist d = row[static_cast<std::size_t>(labels[b].first)];
        if (!is_finite(d)) continue;
        const std::int64_t dk = labels[a].second > labels[b].second
                                    ? labels[a].second - labels[b].second
                                    : labels[b].second - labels[a].second;
        edges.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b), d + r0 * dk});
      }
    }
  }
  return make(Net::from_edges(labels.size(), std::move(edges), r0));
}

}  // namespace coarse
