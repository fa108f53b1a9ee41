#include "coarse/expansion.hpp"

#include <algorithm>
#include <functional>

#include "coarse/uf_flow.hpp"

namespace coarse {

namespace {

// Incremental |N_r(S)| under single-vertex toggles.
class NeighborhoodCounter {
 public:
  NeighborhoodCounter(const Window& w, Dist r) : count_(w.size(), 0) {
    balls_.resize(w.size());
    for (Vertex x : w.core()) balls_[static_cast<std::size_t>(x)] = ball(w.net(), x, r);
  }

  void add(Vertex x) {
    for (Vertex y : balls_[static_cast<std::size_t>(x)])
      if (count_[static_cast<std::size_t>(y)]++ == 0) ++covered_;
    ++size_;
  }
  void remove(Vertex x) {
    for (Vertex y : balls_[static_cast<std::size_t>(x)])
      if (--count_[static_cast<std::size_t>(y)] == 0) --covered_;
    --size_;
  }
  std::size_t covered() const { return covered_; }
  std::size_t size() const { return size_; }
  std::size_t boundary() const { return covered_ - size_; }

 private:
  std::vector<VertexSet> balls_;
  std::vector<std::uint32_t> count_;
  std::size_t covered_ = 0;
  std::size_t size_ = 0;
};

bool better(std::size_t b1, std::size_t s1, std::size_t b2, std::size_t s2) {
  // b1/s1 < b2/s2, ties broken towards larger sets.
  const auto lhs = static_cast<unsigned __int128>(b1) * s2;
  const auto rhs = static_cast<unsigned __int128>(b2) * s1;
  return lhs < rhs || (lhs == rhs && s1 > s2);
}

ExpansionReport make_report(const Window& w, Dist r, VertexSet s, SearchMethod m) {
  ExpansionReport rep;
  rep.radius = r;
  rep.set = std::move(s);
  rep.boundary_size = boundary(w.net(), rep.set, r).size();
  rep.ratio = Rational(static_cast<std::int64_t>(rep.boundary_size),
                       static_cast<std::int64_t>(rep.set.size()));
  rep.method = m;
  return rep;
}

ExpansionReport exhaustive(const Window& w, Dist r) {
  const VertexSet& core = w.core();
  const std::size_t k = core.size();
  NeighborhoodCounter nc(w, r);
  std::uint32_t best_mask = 0;
  std::size_t best_b = 0, best_s = 0;
  std::uint32_t gray = 0;
  for (std::uint32_t i = 1; i < (1u << k); ++i) {
    const std::uint32_t next = i ^ (i >> 1);
    const std::uint32_t flip = next ^ gray;
    const int bit = __builtin_ctz(flip);
    if (next & flip)
      nc.add(core[static_cast<std::size_t>(bit)]);
    else
      nc.remove(core[static_cast<std::size_t>(bit)]);
    gray = next;
    if (best_s == 0 || better(nc.boundary(), nc.size(), best_b, best_s)) {
      best_b = nc.boundary();
      best_s = nc.size();
      best_mask = gray;
    }
  }
  VertexSet s;
  for (std::size_t b = 0; b < k; ++b)
    if (best_mask >> b & 1u) s.push_back(core[b]);
  return make_report(w, r, std::move(s), SearchMethod::kExhaustive);
}

}  // namespace

const char* search_method_name(SearchMethod m) {
  switch (m) {
    case SearchMethod::kExhaustive: return "exhaustive";
    case SearchMethod::kMinCut: return "min-cut";
    case SearchMethod::kLocalSearch: return "local-search";
  }
  return "?";
}

ExpansionReport folner_search(const Window& w, Dist r, std::size_t budget) {
  if (r < 1) throw Error(ErrorCode::kInvalidArgument, "radius must be at least 1");
  if (w.core().size() <= kExhaustiveCoreLimit) return exhaustive(w, r);

  // Seeds: the whole core, and min-cut sets of [core] at scale r for a range
  // of caps (each violation set carries more mass than its cut).
  std::vector<VertexSet> seeds{w.core()};
  const Chain0 unit = unit_chain(w);
  for (std::int64_t cap = 1; cap <= 64; cap *= 2) {
    BoundOutcome o = bound_certificate(unit, r, cap, w);
    const auto* cert = std::get_if<ViolationCert>(&o);
    if (!cert) break;
    seeds.push_back(cert->set);
  }

  NeighborhoodCounter nc(w, r);
  std::vector<char> in(w.size(), 0);
  VertexSet best_set;
  std::size_t best_b = 0, best_s = 0;
  SearchMethod best_method = SearchMethod::kMinCut;
  std::size_t steps = 0;

  for (std::size_t si = 0; si < seeds.size(); ++si) {
    for (Vertex x : w.core())
      if (in[static_cast<std::size_t>(x)]) {
        nc.remove(x);
        in[static_cast<std::size_t>(x)] = 0;
      }
    for (Vertex x : seeds[si]) {
      nc.add(x);
      in[static_cast<std::size_t>(x)] = 1;
    }
    SearchMethod method = SearchMethod::kMinCut;
    if (best_s == 0 || better(nc.boundary(), nc.size(), best_b, best_s)) {
      best_b = nc.boundary();
      best_s = nc.size();
      best_set = seeds[si];
      best_method = method;
    }
    // First-improvement single-vertex moves.
    bool improved = true;
    while (improved && steps < budget) {
      improved = false;
      for (Vertex x : w.core()) {
        const bool inside = in[static_cast<std::size_t>(x)] != 0;
        if (inside && nc.size() == 1) continue;
        const std::size_t b0 = nc.boundary(), s0 = nc.size();
        inside ? nc.remove(x) : nc.add(x);
        if (better(nc.boundary(), nc.size(), b0, s0) && nc.boundary() * s0 != b0 * nc.size()) {
          in[static_cast<std::size_t>(x)] = inside ? 0 : 1;
          improved = true;
          method = SearchMethod::kLocalSearch;
          if (++steps >= budget) break;
        } else {
          inside ? nc.add(x) : nc.remove(x);
        }
      }
    }
    if (better(nc.boundary(), nc.size(), best_b, best_s)) {
      best_b = nc.boundary();
      best_s = nc.size();
      best_set.clear();
      for (Vertex x : w.core())
        if (in[static_cast<std::size_t>(x)]) best_set.push_back(x);
      best_method = method;
    }
  }
  return make_report(w, r, std::move(best_set), best_method);
}

std::pair<Rational, Dist> amplify_expansion(const Rational& c, Dist r, int k) {
  if (!(c > 0 && c < 1)) throw Error(ErrorCode::kInvalidArgument, "constant must lie in (0, 1)");
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  Rational p(1);
  for (int i = 0; i < k; ++i) p *= c;
  return {p, r * k};
}

AmplificationCheck check_amplification(const Window& w, const Rational& c, Dist r, int k,
                                       std::size_t max_set_size) {
  AmplificationCheck out;
  std::tie(out.amplified_constant, out.amplified_radius) = amplify_expansion(c, r, k);
  NeighborhoodCounter base(w, r);
  NeighborhoodCounter amp(w, out.amplified_radius);
  const VertexSet& core = w.core();

  // Pass 0 checks the base inequality, pass 1 the amplified one.
  for (int pass = 0; pass < 2; ++pass) {
    if (pass == 1 && !out.base_holds) break;
    NeighborhoodCounter& nc = pass == 0 ? base : amp;
    const Rational& constant = pass == 0 ? c : out.amplified_constant;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      for (std::size_t i = start; i < core.size(); ++i) {
        nc.add(core[i]);
        if (pass == 0) ++out.sets_checked;
        const Rational lhs(static_cast<std::int64_t>(nc.size()));
        if (lhs > constant * Rational(static_cast<std::int64_t>(nc.covered()))) {
          if (pass == 0) out.base_holds = false;
          else {
            out.amplified_holds = false;
            ++out.violations;
          }
        }
        if (nc.size() < max_set_size) rec(i + 1);
        nc.remove(core[i]);
      }
    };
    rec(0);
  }
  return out;
}

}  // namespace coarse
