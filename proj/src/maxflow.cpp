#include "coarse/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace coarse {

FlowNetwork::FlowNetwork(std::size_t nodes) : head_(nodes) {}

std::size_t FlowNetwork::add_edge(std::size_t u, std::size_t v, Capacity cap, Capacity reverse_cap) {
  if (u >= head_.size() || v >= head_.size()) throw std::out_of_range("flow node out of range");
  if (cap < 0 || reverse_cap < 0) throw std::invalid_argument("negative capacity");
  const std::size_t id = arcs_.size();
  arcs_.push_back({v, cap, cap});
  arcs_.push_back({u, reverse_cap, reverse_cap});
  head_[u].push_back(id);
  head_[v].push_back(id + 1);
  return id;
}

FlowNetwork::Capacity FlowNetwork::flow(std::size_t arc) const {
  return arcs_[arc].initial - arcs_[arc].residual;
}

FlowNetwork::Capacity FlowNetwork::solve(std::size_t source, std::size_t sink, FlowAlgorithm algo) {
  source_ = source;
  sink_ = sink;
  if (source == sink) throw std::invalid_argument("source equals sink");
  return algo == FlowAlgorithm::kDinic ? dinic() : edmonds_karp();
}

bool FlowNetwork::build_levels() {
  level_.assign(head_.size(), -1);
  std::deque<std::size_t> q{source_};
  level_[source_] = 0;
  while (!q.empty()) {
    std::size_t u = q.front();
    q.pop_front();
    for (std::size_t id : head_[u]) {
      const Arc& a = arcs_[id];
      if (a.residual > 0 && level_[a.to] < 0) {
        level_[a.to] = level_[u] + 1;
        q.push_back(a.to);
      }
    }
  }
  return level_[sink_] >= 0;
}

FlowNetwork::Capacity FlowNetwork::push(std::size_t u, Capacity limit) {
  if (u == sink_) return limit;
  for (std::size_t& i = iter_[u]; i < head_[u].size(); ++i) {
    const std::size_t id = head_[u][i];
    Arc& a = arcs_[id];
    if (a.residual <= 0 || level_[a.to] != level_[u] + 1) continue;
    Capacity got = push(a.to, std::min(limit, a.residual));
    if (got > 0) {
      a.residual -= got;
      arcs_[id ^ 1].residual += got;
      return got;
    }
  }
  return 0;
}

FlowNetwork::Capacity FlowNetwork::dinic() {
  Capacity total = 0;
  while (build_levels()) {
    iter_.assign(head_.size(), 0);
    while (Capacity got = push(source_, kInfinite)) total += got;
  }
  return total;
}

FlowNetwork::Capacity FlowNetwork::edmonds_karp() {
  Capacity total = 0;
  std::vector<std::size_t> via(head_.size());
  for (;;) {
    std::vector<char> seen(head_.size(), 0);
    std::deque<std::size_t> q{source_};
    seen[source_] = 1;
    while (!q.empty() && !seen[sink_]) {
      std::size_t u = q.front();
      q.pop_front();
      for (std::size_t id : head_[u]) {
        const Arc& a = arcs_[id];
        if (a.residual > 0 && !seen[a.to]) {
          seen[a.to] = 1;
          via[a.to] = id;
          q.push_back(a.to);
        }
      }
    }
    if (!seen[sink_]) return total;
    Capacity bottleneck = kInfinite;
    for (std::size_t v = sink_; v != source_; v = arcs_[via[v] ^ 1].to)
      bottleneck = std::min(bottleneck, arcs_[via[v]].residual);
    for (std::size_t v = sink_; v != source_; v = arcs_[via[v] ^ 1].to) {
      arcs_[via[v]].residual -= bottleneck;
      arcs_[via[v] ^ 1].residual += bottleneck;
    }
    total += bottleneck;
  }
}

std::vector<char> FlowNetwork::source_side() const {
  std::vector<char> seen(head_.size(), 0);
  std::deque<std::size_t> q{source_};
  seen[source_] = 1;
  while (!q.empty()) {
    std::size_t u = q.front();
    q.pop_front();
    for (std::size_t id : head_[u]) {
      const Arc& a = arcs_[id];
      if (a.residual > 0 && !seen[a.to]) {
        seen[a.to] = 1;
        q.push_back(a.to);
      }
    }
  }
  return seen;
}

}  // namespace coarse
