#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "coarse/coarse_map.hpp"
#include "coarse/generators.hpp"
#include "coarse/matching.hpp"
#include "coarse/net.hpp"

namespace doctest {
template <>
struct StringMaker<coarse::Rational> {
  static String convert(const coarse::Rational& q) {
    std::string s = std::to_string(q.numerator());
    if (q.denominator() != 1) s += "/" + std::to_string(q.denominator());
    return String(s.c_str());
  }
};
}  // namespace doctest

namespace testing {

inline coarse::Rational Q(std::int64_t n, std::int64_t d = 1) { return coarse::Rational(n, d); }


using namespace coarse;

// Unit-length path on vertices 0..n-1.
inline Net path_net(int n) {
  std::vector<WeightedEdge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, 1});
  return Net::from_edges(static_cast<std::size_t>(n), e, 1);
}

// 1-d lattice window [0, n) with core [lo, hi].
inline Window interval(int n, int lo, int hi) {
  VertexSet core;
  for (int i = lo; i <= hi; ++i) core.push_back(i);
  return Window(path_net(n), core);
}

inline VertexSet range_set(int lo, int hi) {
  VertexSet s;
  for (int i = lo; i <= hi; ++i) s.push_back(i);
  return s;
}

inline CoarseMap map_from(const Net& src, const Net& dst, const std::function<Vertex(Vertex)>& fn) {
  std::vector<Vertex> t(src.size());
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = fn(static_cast<Vertex>(x));
  return CoarseMap(src, dst, t);
}

// Random connected graph with unit edges: a random spanning tree plus extras.
inline Net random_graph(std::mt19937_64& rng, int n, int extra) {
  std::vector<WeightedEdge> e;
  for (int i = 1; i < n; ++i) e.push_back({static_cast<Vertex>(uniform_below(rng, i)), i, 1});
  for (int k = 0; k < extra; ++k) {
    auto a = static_cast<Vertex>(uniform_below(rng, n));
    auto b = static_cast<Vertex>(uniform_below(rng, n));
    if (a != b) e.push_back({a, b, 1});
  }
  return Net::from_edges(static_cast<std::size_t>(n), e, 1);
}

inline VertexSet random_subset(std::mt19937_64& rng, std::size_t n, double p) {
  VertexSet s;
  for (std::size_t i = 0; i < n; ++i)
    if (static_cast<double>(uniform_below(rng, 1000)) < p * 1000) s.push_back(static_cast<Vertex>(i));
  return s;
}

// Exhaustive search for an injective choice a -> g(a).
inline bool brute_force_injection(const CandidateMap& p) {
  std::vector<char> used(p.right_size, 0);
  std::function<bool(std::size_t)> go = [&](std::size_t a) {
    if (a == p.left_size()) return true;
    for (Vertex b : p.candidates[a]) {
      if (used[static_cast<std::size_t>(b)]) continue;
      used[static_cast<std::size_t>(b)] = 1;
      if (go(a + 1)) return true;
      used[static_cast<std::size_t>(b)] = 0;
    }
    return false;
  };
  return go(0);
}

}  // namespace testing
