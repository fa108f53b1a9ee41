#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "coarse/matching.hpp"
#include "coarse/net.hpp"

namespace coarse {

// Injective, fixed-point-free F: core x {0, 1} -> window with
// d(F(z, e), z) <= radius.
struct DoublingMap {
  Dist radius = 0;
  VertexSet core;
  std::size_t window_size = 0;
  // image[0][i], image[1][i] = F(core[i], 0), F(core[i], 1).
  std::vector<Vertex> image[2];
  Dist max_displacement = 0;
};

struct DoublingDeficiency {
  Dist radius = 0;
  // Core vertices whose doubled copies violate Hall's condition.
  VertexSet set;
  std::size_t demand = 0;      // copies in the violating set
  std::size_t union_size = 0;  // |union of B_r(z) \ {z}|
};

using DoublingOutcome = std::variant<DoublingMap, DoublingDeficiency>;

// Candidates B_r(z) \ {z} for both copies of each core vertex z; core targets
// are saturated first.
DoublingOutcome doubling_injection(const Window& w, Dist r);

bool verify_doubling_deficiency(const Window& w, const DoublingDeficiency& d);

// Re-pairs targets of F so that cycles of Gamma on different components join,
// keeping injectivity, fixed-point freedom and the radius. Each merge spares
// two core vertices from losing valence when loops are cut. Returns the
// number of merges.
std::size_t merge_cycles(DoublingMap& f, const Window& w);

struct DirectedEdge {
  Vertex from = 0;
  Vertex to = 0;
  friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

// z -> F(z, 0), z -> F(z, 1) for every core vertex z.
struct OutGraph {
  std::size_t vertex_count = 0;
  std::vector<DirectedEdge> edges;  // sorted
  std::vector<std::uint32_t> out_degree;
  std::vector<std::uint32_t> in_degree;
  // Core vertices and images of F.
  std::vector<char> in_support;
};

OutGraph build_gamma(const DoublingMap& f);

struct ComponentReport {
  VertexSet vertices;
  std::size_t edge_count = 0;
  // Cycle vertices in orientation order, empty when the component is a tree.
  std::vector<Vertex> cycle;
  bool cycle_oriented = true;
};

// Undirected components of the support of Gamma. Every component has at most
// as many edges as vertices, hence at most one cycle.
std::vector<ComponentReport> verify_unicyclic(const OutGraph& g);

struct ForestComponent {
  VertexSet vertices;
  std::size_t cycle_length = 0;
  std::optional<DirectedEdge> cut_edge;
};

struct ForestPartition {
  std::size_t vertex_count = 0;
  std::vector<ForestComponent> components;
  std::vector<DirectedEdge> edges;  // forest edges after cutting, sorted
  std::vector<char> in_support;
  std::vector<std::uint32_t> valence;  // undirected, after cutting
};

// Removes the lexicographically smallest cycle edge of each unicyclic
// component.
ForestPartition cut_loops(const OutGraph& g, const std::vector<ComponentReport>& components);
ForestPartition cut_loops(const OutGraph& g);

struct ForestStats {
  std::map<std::uint32_t, std::size_t> valence_histogram;  // over the support
  double trivalent_fraction = 0.0;                          // over the core
  std::map<std::size_t, std::size_t> component_sizes;       // size -> count
  std::size_t component_count = 0;
  Dist max_displacement = 0;
  // Largest sampled ratio of tree hop distance to window distance.
  double max_distortion = 0.0;
  std::size_t distortion_samples = 0;
  bool acyclic = true;
  std::uint32_t max_valence = 0;
};

ForestStats forest_stats(const ForestPartition& p, const Window& w, const DoublingMap& f,
                         std::size_t samples_per_component = 16);

struct TreeifyResult {
  Dist radius = 0;
  DoublingMap doubling;
  OutGraph gamma;
  std::vector<ComponentReport> components;
  ForestPartition forest;
  ForestStats stats;
};

// Least feasible radius in [r0, r_max] (doubling then binary search), then
// Gamma, the unicyclic audit, loop cutting and statistics. On failure returns
// the deficiency at r_max. r_max <= 0 means the window diameter.
std::variant<TreeifyResult, DoublingDeficiency> treeify(const Window& w, Dist r_max);

void write_forest_dot(std::ostream& out, const ForestPartition& p, const Window& w);
void write_forest_graphml(std::ostream& out, const ForestPartition& p, const Window& w);

}  // namespace coarse
