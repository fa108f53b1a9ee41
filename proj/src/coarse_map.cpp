#include "coarse/coarse_map.hpp"

#include <algorithm>
#include <map>

namespace coarse {

CoarseMap::CoarseMap(Net source, Net target, std::vector<Vertex> table)
    : source_(std::move(source)), target_(std::move(target)), table_(std::move(table)) {
  if (table_.size() != source_.size())
    throw Error(ErrorCode::kDomainMismatch, "map table has " + std::to_string(table_.size()) +
                                                " entries for a source of size " +
                                                std::to_string(source_.size()));
  for (Vertex y : table_) target_.check_vertex(y);
}

CoarseMap CoarseMap::identity(const Net& net) {
  std::vector<Vertex> t(net.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Vertex>(i);
  return CoarseMap(net, net, std::move(t));
}

VertexSet CoarseMap::preimage(std::span<const Vertex> s) const {
  std::vector<char> in(target_.size(), 0);
  for (Vertex y : s) in[static_cast<std::size_t>(y)] = 1;
  VertexSet out;
  for (std::size_t x = 0; x < table_.size(); ++x)
    if (in[static_cast<std::size_t>(table_[x])]) out.push_back(static_cast<Vertex>(x));
  return out;
}

VertexSet CoarseMap::image() const { return make_set(table_); }

MapStats measure_params(const CoarseMap& f, const MeasureOptions& options) {
  const Net& src = f.source();
  const Net& dst = f.target();
  const std::size_t n = src.size();
  MapStats stats;

  // omega over realized source distances, and the properness table.
  std::map<Dist, Dist> omega;
  std::vector<Dist> prop(static_cast<std::size_t>(std::max<Dist>(options.modulus_radius, 0)) + 1, 0);
  for (std::size_t a = 0; a < n; ++a) {
    const auto va = static_cast<Vertex>(a);
    std::vector<Dist> srow = src.distances_from(va);
    std::vector<Dist> trow = dst.distances_from(f(va));
    for (std::size_t b = a + 1; b < n; ++b) {
      Dist ds = srow[b];
      Dist dt = trow[static_cast<std::size_t>(f(static_cast<Vertex>(b)))];
      if (is_finite(ds)) {
        auto [it, inserted] = omega.emplace(ds, dt);
        if (!inserted) it->second = std::max(it->second, dt);
      }
      for (std::size_t r = 0; r < prop.size(); ++r)
        if (dt <= static_cast<Dist>(r)) prop[r] = std::max(prop[r], ds);
    }
  }
  // omega as an upper envelope: non-decreasing in t.
  Dist running = 0;
  for (auto& [t, w] : omega) {
    running = std::max(running, w);
    w = running;
  }
  const Dist r0 = src.r0();
  Dist omega_r0 = 0;
  for (auto [t, w] : omega)
    if (t <= r0) omega_r0 = std::max(omega_r0, w);
  if (omega_r0 >= kInfDist) omega_r0 = kInfDist;
  Rational slope(0);
  for (auto [t, w] : omega) {
    if (t <= r0) continue;
    if (!is_finite(w)) continue;  // fibers across target components: no finite slope
    Rational cand(w - omega_r0, t - r0);
    slope = std::max(slope, cand);
  }
  stats.slope = slope;
  Rational b = Rational(omega_r0) - slope * Rational(r0);
  if (b < 0) b = 0;
  stats.offset = b.numerator() / b.denominator() + (b.numerator() % b.denominator() != 0 ? 1 : 0);
  if (!is_finite(omega_r0)) stats.offset = kInfDist;
  stats.properness = std::move(prop);
  for (std::size_t r = 1; r < stats.properness.size(); ++r)
    stats.properness[r] = std::max(stats.properness[r], stats.properness[r - 1]);

  VertexSet core = options.target_core;
  if (core.empty())
    for (std::size_t y = 0; y < dst.size(); ++y) core.push_back(static_cast<Vertex>(y));
  VertexSet img = f.image();
  std::vector<Dist> to_img = distances_to_set(dst, img);
  Dist sr = 0;
  for (Vertex y : core) sr = std::max(sr, to_img[static_cast<std::size_t>(y)]);
  stats.surjectivity_radius = sr;

  if (options.compare_with) stats.displacement_to = displacement(f, *options.compare_with);
  return stats;
}

bool envelope_holds(const CoarseMap& f, const MapStats& stats) {
  const Net& src = f.source();
  const Net& dst = f.target();
  for (std::size_t a = 0; a < src.size(); ++a) {
    const auto va = static_cast<Vertex>(a);
    std::vector<Dist> srow = src.distances_from(va);
    std::vector<Dist> trow = dst.distances_from(f(va));
    for (std::size_t b = a + 1; b < src.size(); ++b) {
      if (!is_finite(srow[b])) continue;
      Dist dt = trow[static_cast<std::size_t>(f(static_cast<Vertex>(b)))];
      if (Rational(dt) > stats.slope * Rational(srow[b]) + Rational(stats.offset)) return false;
    }
  }
  return true;
}

Dist displacement(const CoarseMap& f, const CoarseMap& g) {
  if (!f.source().same_space(g.source()) || !f.target().same_space(g.target()))
    throw Error(ErrorCode::kDomainMismatch, "displacement needs maps with common source and target");
  Dist best = 0;
  for (std::size_t x = 0; x < f.table().size(); ++x) {
    const auto vx = static_cast<Vertex>(x);
    best = std::max(best, f.target().distance(f(vx), g(vx)));
  }
  return best;
}

CoarseMap compose(const CoarseMap& outer, const CoarseMap& inner) {
  if (!inner.target().same_space(outer.source()))
    throw Error(ErrorCode::kDomainMismatch, "compose: inner target is not outer source");
  std::vector<Vertex> t(inner.table().size());
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = outer(inner(static_cast<Vertex>(x)));
  return CoarseMap(inner.source(), outer.target(), std::move(t));
}

Chain0 push_chain(const CoarseMap& f, const Chain0& c) {
  if (c.size() != f.source().size())
    throw Error(ErrorCode::kDomainMismatch, "chain does not live on the map source");
  Chain0 out(f.target().size());
  for (std::size_t x = 0; x < c.size(); ++x) out[f(static_cast<Vertex>(x))] += c[static_cast<Vertex>(x)];
  return out;
}

InverseCheck is_coarse_inverse(const CoarseMap& f, const CoarseMap& g, Dist tolerance) {
  if (!f.source().same_space(g.target()) || !f.target().same_space(g.source()))
    throw Error(ErrorCode::kDomainMismatch, "is_coarse_inverse needs f: X->Y and g: Y->X");
  InverseCheck r;
  r.fg_to_identity = displacement(compose(f, g), CoarseMap::identity(f.target()));
  r.gf_to_identity = displacement(compose(g, f), CoarseMap::identity(f.source()));
  r.ok = r.fg_to_identity <= tolerance && r.gf_to_identity <= tolerance;
  return r;
}

CoarseMap nearest_inverse(const CoarseMap& f, std::span<const Vertex> domain) {
  VertexSet dom(domain.begin(), domain.end());
  if (dom.empty())
    for (std::size_t x = 0; x < f.source().size(); ++x) dom.push_back(static_cast<Vertex>(x));
  dom = make_set(std::move(dom));
  const Net& dst = f.target();
  std::vector<Vertex> t(dst.size(), kNoVertex);
  std::vector<Dist> best(dst.size(), kInfDist);
  for (Vertex x : dom) {
    std::vector<Dist> row = dst.distances_from(f(x));
    for (std::size_t y = 0; y < dst.size(); ++y) {
      if (row[y] < best[y]) {
        best[y] = row[y];
        t[y] = x;
      }
    }
  }
  for (auto& v : t)
    if (v == kNoVertex) v = dom.front();
  return CoarseMap(dst, f.source(), std::move(t));
}

}  // namespace coarse
