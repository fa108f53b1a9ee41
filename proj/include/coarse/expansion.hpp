#pragma once

#include <cstdint>
#include <string>

#include "coarse/net.hpp"

namespace coarse {

enum class SearchMethod { kExhaustive, kMinCut, kLocalSearch };

const char* search_method_name(SearchMethod m);

// Best (smallest) |boundary_r S| / |S| found over nonempty S in the core.
struct ExpansionReport {
  Dist radius = 1;
  VertexSet set;
  std::size_t boundary_size = 0;
  Rational ratio{0};
  SearchMethod method = SearchMethod::kExhaustive;
};

inline constexpr std::size_t kExhaustiveCoreLimit = 20;

// Exhaustive over all subsets when the core has at most 20 vertices;
// otherwise seeded by min-cut sets at scale r and refined by single-vertex
// moves for at most `budget` improving steps.
ExpansionReport folner_search(const Window& w, Dist r, std::size_t budget = 1000);

// (C^k, k r): the constant and radius the base inequality |A| <= C |N_r(A)|
// amplifies to.
std::pair<Rational, Dist> amplify_expansion(const Rational& c, Dist r, int k);

struct AmplificationCheck {
  bool base_holds = true;
  bool amplified_holds = true;
  std::size_t sets_checked = 0;
  std::size_t violations = 0;
  Rational amplified_constant{0};
  Dist amplified_radius = 0;
};

// Enumerates every nonempty S in the core with |S| <= max_set_size and checks
// |S| <= C |N_r(S)|; if that holds for all of them, checks
// |S| <= C^k |N_{kr}(S)| on the same sets.
AmplificationCheck check_amplification(const Window& w, const Rational& c, Dist r, int k,
                                       std::size_t max_set_size);

}  // namespace coarse
