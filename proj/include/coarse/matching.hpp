#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "coarse/types.hpp"

namespace coarse {

// Hall instance: left elements 0..left_size-1, right elements
// 0..right_size-1, and the finite candidate set g(a) of each left element.
struct CandidateMap {
  std::size_t right_size = 0;
  std::vector<VertexSet> candidates;

  std::size_t left_size() const { return candidates.size(); }
};

// Partial injective map. image[a] is kNoVertex where undefined.
struct Injection {
  std::vector<Vertex> image;

  std::size_t defined_count() const;
};

// Witness that Hall's condition fails: |set| > |union of candidates of set|.
struct DeficiencyCert {
  VertexSet set;
  std::size_t union_size = 0;
};

using MatchOutcome = std::variant<Injection, DeficiencyCert>;

// Hopcroft-Karp matching of every left element into its candidate set. On
// failure the deficiency set is read off the alternating-reachability sets of
// a maximum matching. Right elements flagged in `preferred` are saturated
// first: the matching covers as many of them as any matching can.
MatchOutcome constrained_injection(const CandidateMap& problem,
                                   std::span<const char> preferred = {});

// Recomputes |union of candidates of s|.
std::size_t candidate_union_size(const CandidateMap& problem, std::span<const Vertex> s);

bool is_injective(const Injection& f, std::size_t codomain_size);

// Partial bijection between X and Y.
struct Bijection {
  std::vector<Vertex> forward;   // X -> Y
  std::vector<Vertex> backward;  // Y -> X
  // forward[x] was taken from the inverse of the second injection.
  std::vector<char> from_inverse;

  std::size_t pair_count() const;
};

// Schroeder-Bernstein: given injections phi: X -> Y and psi: Y -> X (partial
// on frame vertices), pairs every vertex in the domain of phi and every vertex
// in the domain of psi so that each pair (x, y) has y = phi(x) or psi(y) = x.
// Paths of the union graph starting in X and all cycles follow phi; paths
// starting in Y follow psi^-1.
Bijection sb_combine(const Injection& phi, const Injection& psi);

}  // namespace coarse
