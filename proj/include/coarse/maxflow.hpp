#pragma once

#include <cstdint>
#include <vector>

namespace coarse {

enum class FlowAlgorithm {
  kDinic,        // blocking flows on BFS level graphs
  kEdmondsKarp,  // one BFS shortest augmenting path at a time
};

// Integer-capacity flow network with exact max-flow / min-cut.
class FlowNetwork {
 public:
  using Capacity = std::int64_t;
  static constexpr Capacity kInfinite = INT64_MAX / 4;

  explicit FlowNetwork(std::size_t nodes);

  std::size_t node_count() const { return head_.size(); }
  // Adds u -> v with capacity cap and v -> u with capacity reverse_cap. Returns
  // the id of the forward arc.
  std::size_t add_edge(std::size_t u, std::size_t v, Capacity cap, Capacity reverse_cap = 0);

  Capacity solve(std::size_t source, std::size_t sink, FlowAlgorithm algo = FlowAlgorithm::kDinic);

  // Net flow along arc id (negative if it runs backwards).
  Capacity flow(std::size_t arc) const;
  // Nodes reachable from the source in the residual graph after solve().
  std::vector<char> source_side() const;

 private:
  struct Arc {
    std::size_t to;
    Capacity residual;
    Capacity initial;
  };

  Capacity dinic();
  Capacity edmonds_karp();
  bool build_levels();
  Capacity push(std::size_t u, Capacity limit);

  std::vector<std::vector<std::size_t>> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  std::size_t source_ = 0;
  std::size_t sink_ = 0;
};

}  // namespace coarse
