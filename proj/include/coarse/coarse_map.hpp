#pragma once

#include <optional>
#include <span>
#include <vector>

#include "coarse/chain.hpp"
#include "coarse/net.hpp"

namespace coarse {

// Total vertex-to-vertex map between two nets.
class CoarseMap {
 public:
  CoarseMap(Net source, Net target, std::vector<Vertex> table);
  static CoarseMap identity(const Net& net);

  const Net& source() const { return source_; }
  const Net& target() const { return target_; }
  const std::vector<Vertex>& table() const { return table_; }
  Vertex operator()(Vertex x) const { return table_[static_cast<std::size_t>(x)]; }

  // Source vertices mapped into s.
  VertexSet preimage(std::span<const Vertex> s) const;
  VertexSet image() const;

  friend bool operator==(const CoarseMap& a, const CoarseMap& b) {
    return a.table_ == b.table_ && a.source_.same_space(b.source_) &&
           a.target_.same_space(b.target_);
  }

 private:
  Net source_;
  Net target_;
  std::vector<Vertex> table_;
};

// Measured coarse-geometry constants of a map.
//
// The envelope omega(t) = max{ d(f x1, f x2) : d(x1, x2) <= t } is computed
// exactly over all realized source distances t. The slope is the least A with
// omega(t) <= omega(r0) + A (t - r0) for every realized t > r0, and the offset
// is B = ceil(max(0, omega(r0) - A r0)), so d(f x1, f x2) <= A d(x1, x2) + B
// holds for every pair.
struct MapStats {
  Rational slope{0};
  Dist offset = 0;
  // properness[r] = max{ d(x1, x2) : d(f x1, f x2) <= r }, kInfDist when a
  // fiber reaches across components.
  std::vector<Dist> properness;
  // Smallest t with N_t(image) covering the target core; kInfDist if none.
  Dist surjectivity_radius = kInfDist;
  std::optional<Dist> displacement_to;
};

struct MeasureOptions {
  Dist modulus_radius = 8;
  // Target core used for the surjectivity radius; all target vertices if empty.
  VertexSet target_core;
  const class CoarseMap* compare_with = nullptr;
};

MapStats measure_params(const CoarseMap& f, const MeasureOptions& options = {});

// Re-checks d(f x1, f x2) <= A d(x1, x2) + B over all pairs.
bool envelope_holds(const CoarseMap& f, const MapStats& stats);

// max over x of d(f x, g x).
Dist displacement(const CoarseMap& f, const CoarseMap& g);

// outer after inner: x -> outer(inner(x)).
CoarseMap compose(const CoarseMap& outer, const CoarseMap& inner);

// (f_* c)(y) = sum of c over the fiber of y.
Chain0 push_chain(const CoarseMap& f, const Chain0& c);

struct InverseCheck {
  bool ok = false;
  Dist fg_to_identity = 0;  // displacement(f o g, id_Y)
  Dist gf_to_identity = 0;  // displacement(g o f, id_X)
};

InverseCheck is_coarse_inverse(const CoarseMap& f, const CoarseMap& g, Dist tolerance);

// Coarse inverse sending y to the nearest source vertex of `domain` (ties by
// smallest id). `domain` defaults to all source vertices.
CoarseMap nearest_inverse(const CoarseMap& f, std::span<const Vertex> domain = {});

}  // namespace coarse
