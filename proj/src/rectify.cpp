#include "coarse/rectify.hpp"

#include <algorithm>
#include <string>

namespace coarse {

const char* side_name(Side side) {
  return side == Side::kInjectivity ? "injectivity" : "surjectivity";
}

NearInjection injection_near_map(const Window& x, const Window& y, const CoarseMap& f, Dist r,
                                 const NearMapOptions& options) {
  if (!f.source().same_space(x.net()) || !f.target().same_space(y.net()))
    throw Error(ErrorCode::kDomainMismatch, "map does not run between the given windows");
  if (r < 0) throw Error(ErrorCode::kInvalidArgument, "negative radius");

  const VertexSet& dom = x.core();
  CandidateMap problem;
  problem.right_size = y.size();
  problem.candidates.reserve(dom.size());
  NearInjection result;
  for (Vertex v : dom) {
    const Vertex fx = f(v);
    VertexSet cand = ball(y.net(), fx, r);
    bool touches_frame = false;
    for (Vertex c : cand)
      if (!y.in_core(c)) touches_frame = true;
    if (touches_frame) ++result.frame_touching;
    if (options.forbid_fixed) cand.erase(std::remove(cand.begin(), cand.end(), fx), cand.end());
    if (cand.empty())
      throw Error(ErrorCode::kEmptyCandidateSet,
                  "vertex " + std::to_string(v) + " has no admissible value within radius " +
                      std::to_string(r));
    problem.candidates.push_back(std::move(cand));
  }

  std::vector<char> preferred;
  if (options.prefer_core) {
    preferred.assign(y.size(), 0);
    for (Vertex c : y.core()) preferred[static_cast<std::size_t>(c)] = 1;
  }
  MatchOutcome m = constrained_injection(problem, preferred);
  if (auto* inj = std::get_if<Injection>(&m)) {
    Injection full;
    full.image.assign(x.size(), kNoVertex);
    for (std::size_t i = 0; i < dom.size(); ++i) {
      const Vertex v = dom[i];
      const Vertex w = inj->image[i];
      full.image[static_cast<std::size_t>(v)] = w;
      result.displacement = std::max(result.displacement, y.net().distance(w, f(v)));
    }
    result.outcome = std::move(full);
  } else {
    auto& cert = std::get<DeficiencyCert>(m);
    DeficiencyCert mapped;
    mapped.union_size = cert.union_size;
    for (Vertex i : cert.set) mapped.set.push_back(dom[static_cast<std::size_t>(i)]);
    result.outcome = std::move(mapped);
  }
  return result;
}

namespace {

// Deficiency set D in the core of m's source -> S = m(D) with the closure
// D' = m^-1(S) restricted to the core.
ObstructionCert to_obstruction(const Window& src, const Window& dst, const CoarseMap& m,
                               const DeficiencyCert& d, Dist r, Side side) {
  ObstructionCert cert;
  cert.direction = side;
  cert.radius = r;
  std::vector<Vertex> img;
  for (Vertex v : d.set) img.push_back(m(v));
  cert.set = make_set(std::move(img));
  std::size_t lhs = 0;
  for (Vertex v : m.preimage(cert.set))
    if (src.in_core(v)) ++lhs;
  cert.lhs = lhs;
  cert.rhs = neighborhood(dst.net(), cert.set, r).size();
  if (cert.lhs <= cert.rhs)
    throw std::logic_error("obstruction certificate does not violate the counting condition");
  return cert;
}

}  // namespace

RectifyOutcome bijection_near_map(const Window& x, const Window& y, const CoarseMap& f,
                                  const CoarseMap& g, Dist r) {
  NearInjection fwd = injection_near_map(x, y, f, r);
  if (auto* d = std::get_if<DeficiencyCert>(&fwd.outcome))
    return to_obstruction(x, y, f, *d, r, Side::kInjectivity);
  NearInjection bwd = injection_near_map(y, x, g, r);
  if (auto* d = std::get_if<DeficiencyCert>(&bwd.outcome))
    return to_obstruction(y, x, g, *d, r, Side::kSurjectivity);

  RectifiedBijection out;
  out.radius = r;
  out.bijection = sb_combine(std::get<Injection>(fwd.outcome), std::get<Injection>(bwd.outcome));
  for (std::size_t v = 0; v < out.bijection.forward.size(); ++v) {
    const Vertex w = out.bijection.forward[v];
    if (w == kNoVertex) continue;
    out.displacement = std::max(out.displacement, y.net().distance(w, f(static_cast<Vertex>(v))));
  }
  return out;
}

bool verify_obstruction(const Window& x, const Window& y, const CoarseMap& f, const CoarseMap& g,
                        const ObstructionCert& cert) {
  const bool inj = cert.direction == Side::kInjectivity;
  const Window& src = inj ? x : y;
  const Window& dst = inj ? y : x;
  const CoarseMap& m = inj ? f : g;
  for (Vertex v : cert.set)
    if (!dst.net().contains(v)) return false;
  std::size_t lhs = 0;
  for (Vertex v : m.preimage(cert.set))
    if (src.in_core(v)) ++lhs;
  const std::size_t rhs = neighborhood(dst.net(), cert.set, cert.radius).size();
  return lhs == cert.lhs && rhs == cert.rhs && lhs > rhs;
}

RadiusSearch min_feasible_radius(const Window& x, const Window& y, const CoarseMap& f,
                                 const CoarseMap& g, Dist r_max) {
  if (r_max < 0) throw Error(ErrorCode::kInvalidArgument, "negative r_max");
  RadiusSearch s;
  s.r_max = r_max;
  auto attempt = [&](Dist r) {
    RectifyOutcome o = bijection_near_map(x, y, f, g, r);
    if (auto* b = std::get_if<RectifiedBijection>(&o)) {
      s.radius = r;
      s.bijection = std::move(*b);
      return true;
    }
    s.last_certificate = std::get<ObstructionCert>(o);
    return false;
  };

  if (attempt(0)) return s;
  Dist lo = 0;  // known infeasible
  Dist hi = -1;
  for (Dist r = 1;; r = std::min(r * 2, r_max)) {
    if (r > r_max) break;
    if (attempt(r)) {
      hi = r;
      break;
    }
    lo = r;
    if (r == r_max) break;
  }
  if (hi < 0) {
    s.radius.reset();
    s.bijection.reset();
    return s;
  }
  std::optional<RectifiedBijection> best = s.bijection;
  while (hi - lo > 1) {
    Dist mid = lo + (hi - lo) / 2;
    if (attempt(mid)) {
      hi = mid;
      best = s.bijection;
    } else {
      lo = mid;
    }
  }
  s.radius = hi;
  s.bijection = std::move(best);
  return s;
}

}  // namespace coarse
