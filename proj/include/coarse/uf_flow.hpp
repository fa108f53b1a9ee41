#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/coarse_map.hpp"
#include "coarse/net.hpp"

namespace coarse {

enum class ChainMode { kInteger, kRational };

const char* chain_mode_name(ChainMode mode);

// Value of a 1-chain on one undirected scale-l edge, oriented u -> v (u < v).
// The opposite orientation carries the negated value.
struct EdgeFlow {
  Vertex u = 0;
  Vertex v = 0;
  Rational value{0};
};

// Capacity-bounded 1-chain b on the scale-l edges of a window.
struct FlowAssignment {
  Dist scale = 1;
  std::int64_t cap = 1;
  std::size_t vertex_count = 0;
  std::vector<EdgeFlow> values;  // nonzero entries only, sorted by (u, v)
};

enum class ViolationReason {
  kCut,              // Følner-type set with more mass than its cut can carry
  kZeroSumRequired,  // empty frame: conservation forces total mass zero
};

// |sum_S c| > cap * (scale-l edges from S to window \ S).
struct ViolationCert {
  VertexSet set;
  Rational chain_sum{0};
  Rational cut_capacity{0};
  std::size_t cut_edges = 0;
  // |boundary_l(S)|, the neighborhood form of the same inequality.
  std::size_t boundary_size = 0;
  int sign = 1;  // +1: c obstructed, -1: -c obstructed
  Dist scale = 1;
  std::int64_t cap = 1;
  ViolationReason reason = ViolationReason::kCut;
};

using BoundOutcome = std::variant<FlowAssignment, ViolationCert>;

// [core]: 1 on the core, 0 on the frame.
Chain0 unit_chain(const Window& w);

// (db)(x) = net inflow at x.
Chain0 boundary_of_flow(const FlowAssignment& b);

// Decides whether c = db on the core for some b with |b| <= cap on scale-l
// edges, frame vertices having free divergence. Exact max-flow; integer mode
// runs Dinic on the integer chain, rational mode runs Edmonds-Karp on the chain
// scaled by its common denominator.
BoundOutcome bound_certificate(const Chain0& c, Dist scale, std::int64_t cap, const Window& w,
                               ChainMode mode = ChainMode::kInteger);

// Number of scale-l edges from s to the rest of the window.
std::size_t cut_edge_count(const Window& w, std::span<const Vertex> s, Dist scale);

bool verify_flow(const FlowAssignment& b, const Chain0& c, const Window& w);
bool verify_violation(const ViolationCert& cert, const Chain0& c, const Window& w);

struct VanishingResult {
  std::optional<std::int64_t> minimal_cap;
  // Flow at the minimal cap, or the certificate at cap_max.
  BoundOutcome outcome;
};

// bound_certificate on [core], binary-searching the least cap in [1, cap_max].
VanishingResult vanishing_test(const Window& w, Dist scale, std::int64_t cap_max);

// Every core coefficient nonnegative and the positive core vertices
// `density_radius`-dense in the core.
bool is_positive_chain(const Chain0& c, const Window& w, Dist density_radius);

// Z_c = {(x, k) : 0 <= k < c(x)} with d((x,k),(y,m)) = d(x,y) + r0 |k - m|,
// and its projection to the base net.
struct PositiveRealization {
  Net net;
  CoarseMap projection;
  // Label (x, k) of every vertex of Z_c.
  std::vector<std::pair<Vertex, std::int64_t>> labels;
};

PositiveRealization realize_positive_class(const Window& w, const Chain0& c, Dist density_radius);

}  // namespace coarse
