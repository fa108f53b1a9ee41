#pragma once

#include <optional>
#include <variant>

#include "coarse/coarse_map.hpp"
#include "coarse/matching.hpp"
#include "coarse/net.hpp"

namespace coarse {

struct NearMapOptions {
  // Exclude f(x) itself from the candidates of x.
  bool forbid_fixed = false;
  // Saturate core targets before frame targets.
  bool prefer_core = false;
};

// Injection of the source core into the target window within distance r of
// f, or a Hall-violating set of source core vertices.
struct NearInjection {
  // On success, image[x] is defined exactly on the source core.
  std::variant<Injection, DeficiencyCert> outcome;
  // Candidate sets that were clipped by, or reach into, the target frame.
  std::size_t frame_touching = 0;
  Dist displacement = 0;
};

NearInjection injection_near_map(const Window& x, const Window& y, const CoarseMap& f, Dist r,
                                 const NearMapOptions& options = {});

enum class Side { kInjectivity, kSurjectivity };

const char* side_name(Side side);

// Witnessed failure of |m^-1(S)| <= |N_r(S)|, with m = f on the injectivity
// side (S in Y) and m = g on the surjectivity side (S in X). The preimage is
// taken within the core of m's source and the neighborhood within the window
// of m's target.
struct ObstructionCert {
  Side direction = Side::kInjectivity;
  Dist radius = 0;
  VertexSet set;
  std::size_t lhs = 0;
  std::size_t rhs = 0;
};

struct RectifiedBijection {
  Bijection bijection;
  // max over paired x of d(h(x), f(x)).
  Dist displacement = 0;
  Dist radius = 0;
};

using RectifyOutcome = std::variant<RectifiedBijection, ObstructionCert>;

// Bounded-distance bijection near a quasi-isometry f with coarse inverse g:
// constrained injections near f and near g, combined by Schroeder-Bernstein.
RectifyOutcome bijection_near_map(const Window& x, const Window& y, const CoarseMap& f,
                                  const CoarseMap& g, Dist r);

// Recomputes lhs and rhs of a certificate from the nets and maps alone.
bool verify_obstruction(const Window& x, const Window& y, const CoarseMap& f, const CoarseMap& g,
                        const ObstructionCert& cert);

struct RadiusSearch {
  std::optional<Dist> radius;
  std::optional<RectifiedBijection> bijection;
  // Certificate at the largest infeasible radius tried.
  std::optional<ObstructionCert> last_certificate;
  Dist r_max = 0;
};

// Smallest r <= r_max at which bijection_near_map succeeds: r = 0, then
// doubling, then binary search.
RadiusSearch min_feasible_radius(const Window& x, const Window& y, const CoarseMap& f,
                                 const CoarseMap& g, Dist r_max);

}  // namespace coarse
