#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coarse/coarse_map.hpp"
#include "coarse/net.hpp"

namespace coarse {

// Uniform integer in [0, bound) from a 64-bit Mersenne twister by rejection.
// Used instead of std::uniform_int_distribution, whose output is
// implementation-defined, so that seeded families are identical everywhere.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

template <class T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

// Lattice [0, n)^d, L1 metric, core = points at least `margin` from every
// facet.
Window gen_grid(int d, int n, int margin);

// Cayley ball of the free group of the given rank: reduced words of length
// <= radius, ordered by length then letter sequence. Core = words of length
// <= radius - margin.
Window gen_free_group_ball(int rank, int radius, int margin);

// Rooted ball of the valence-regular tree, breadth-first ids. Core = depth
// <= depth - margin.
Window gen_regular_tree_ball(int valence, int depth, int margin);

struct RandomRegularInfo {
  int attempts = 0;
  bool connected = false;
};

// Simple d-regular graph from the pairing model with rejection. The core is
// the first ceil(core_fraction * n) vertices in breadth-first order from
// vertex 0 (all vertices when core_fraction >= 1).
Window gen_random_regular(int d, int n, std::uint64_t seed, double core_fraction = 1.0,
                          RandomRegularInfo* info = nullptr);

struct ProductDouble {
  Window window;
  // (x, i) -> x
  CoarseMap projection;
};

// Z x {0, 1} with d((x,i),(y,j)) = d(x,y) + r0 |i - j|; vertex (x, i) has id
// x + i n. The core is the doubled core.
ProductDouble gen_product_double(const Window& w);

// Lattice net on the given points; core = points at least `margin` inside the
// bounding box in every coordinate.
Window net_from_points(std::vector<Point> points, Dist r0, std::int64_t margin);

}  // namespace coarse
