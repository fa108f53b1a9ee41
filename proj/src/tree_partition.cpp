#include "coarse/tree_partition.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <string>

#include "coarse/generators.hpp"
#include "coarse/rectify.hpp"

namespace coarse {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::size_t doubling_union(const Window& w, const VertexSet& set, Dist r) {
  std::vector<char> hit(w.size(), 0);
  std::size_t count = 0;
  for (Vertex z : set)
    for (Vertex y : ball(w.net(), z, r))
      if (y != z && !hit[static_cast<std::size_t>(y)]) {
        hit[static_cast<std::size_t>(y)] = 1;
        ++count;
      }
  return count;
}

DoublingDeficiency make_deficiency(const Window& w, VertexSet set, Dist r) {
  DoublingDeficiency d;
  d.radius = r;
  d.set = make_set(std::move(set));
  d.demand = 2 * d.set.size();
  d.union_size = doubling_union(w, d.set, r);
  if (d.demand <= d.union_size)
    throw std::logic_error("doubling deficiency does not violate Hall's condition");
  return d;
}

}  // namespace

DoublingOutcome doubling_injection(const Window& w, Dist r) {
  if (r < w.net().r0()) throw Error(ErrorCode::kInvalidArgument, "radius below discreteness radius");
  for (Vertex z : w.core())
    if (ball(w.net(), z, r).size() < 3) return make_deficiency(w, {z}, r);

  const ProductDouble doubled = gen_product_double(w);
  NearMapOptions opts;
  opts.forbid_fixed = true;
  opts.prefer_core = true;
  NearInjection near = injection_near_map(doubled.window, w, doubled.projection, r, opts);
  const auto n = static_cast<Vertex>(w.size());
  if (auto* d = std::get_if<DeficiencyCert>(&near.outcome)) {
    VertexSet base;
    for (Vertex v : d->set) base.push_back(v % n);
    return make_deficiency(w, std::move(base), r);
  }
  const auto& img = std::get<Injection>(near.outcome).image;
  DoublingMap f;
  f.radius = r;
  f.core = w.core();
  f.window_size = w.size();
  for (Vertex z : w.core()) {
    f.image[0].push_back(img[static_cast<std::size_t>(z)]);
    f.image[1].push_back(img[static_cast<std::size_t>(z + n)]);
  }
  f.max_displacement = near.displacement;
  return f;
}

bool verify_doubling_deficiency(const Window& w, const DoublingDeficiency& d) {
  for (Vertex z : d.set)
    if (!w.net().contains(z) || !w.in_core(z)) return false;
  const std::size_t u = doubling_union(w, d.set, d.radius);
  return d.demand == 2 * d.set.size() && u == d.union_size && d.demand > u;
}

std::size_t merge_cycles(DoublingMap& f, const Window& w) {
  const std::size_t n = f.window_size;
  const Net& net = w.net();
  // parent[y] = the edge into y, as (core index, copy).
  std::vector<std::pair<std::int64_t, int>> parent(n, {-1, 0});
  for (int side = 0; side < 2; ++side)
    for (std::size_t i = 0; i < f.core.size(); ++i)
      parent[static_cast<std::size_t>(f.image[side][i])] = {static_cast<std::int64_t>(i), side};
  auto parent_vertex = [&](std::size_t y) {
    return parent[y].first < 0 ? kNoVertex : f.core[static_cast<std::size_t>(parent[y].first)];
  };

  // Swapping the targets of a cycle edge x1 -> y1 with any edge x2 -> y2 of
  // another component joins the two components, leaving at most one cycle.
  auto merge_once = [&] {
    std::vector<std::size_t> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](std::size_t x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    for (std::size_t y = 0; y < n; ++y)
      if (const Vertex x = parent_vertex(y); x != kNoVertex) comp[find(y)] = find(static_cast<std::size_t>(x));
    std::vector<char> on_cycle(n, 0), state(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
      std::vector<std::size_t> walk;
      Vertex v = static_cast<Vertex>(start);
      while (v != kNoVertex && state[static_cast<std::size_t>(v)] == 0) {
        state[static_cast<std::size_t>(v)] = 1;
        walk.push_back(static_cast<std::size_t>(v));
        v = parent_vertex(static_cast<std::size_t>(v));
      }
      if (v != kNoVertex && state[static_cast<std::size_t>(v)] == 1)
        for (std::size_t u = static_cast<std::size_t>(v); !on_cycle[u]; u = static_cast<std::size_t>(parent_vertex(u)))
          on_cycle[u] = 1;
      for (std::size_t u : walk) state[u] = 2;
    }
    for (std::size_t y1 = 0; y1 < n; ++y1) {
      if (!on_cycle[y1]) continue;
      const auto [i1, s1] = parent[y1];
      const Vertex x1 = f.core[static_cast<std::size_t>(i1)];
      for (Vertex y2 : ball(net, x1, f.radius)) {
        const auto y2i = static_cast<std::size_t>(y2);
        if (parent[y2i].first < 0 || y2 == x1 || find(y2i) == find(y1)) continue;
        const auto [i2, s2] = parent[y2i];
        const Vertex x2 = f.core[static_cast<std::size_t>(i2)];
        if (net.distance(x2, static_cast<Vertex>(y1)) > f.radius) continue;
        f.image[s1][static_cast<std::size_t>(i1)] = y2;
        f.image[s2][static_cast<std::size_t>(i2)] = static_cast<Vertex>(y1);
        std::swap(parent[y1], parent[y2i]);
        return true;
      }
    }
    return false;
  };

  std::size_t merges = 0;
  while (merge_once()) ++merges;

  f.max_displacement = 0;
  for (int side = 0; side < 2; ++side)
    for (std::size_t i = 0; i < f.core.size(); ++i)
      f.max_displacement = std::max(f.max_displacement, net.distance(f.core[i], f.image[side][i]));
  return merges;
}

OutGraph build_gamma(const DoublingMap& f) {
  OutGraph g;
  g.vertex_count = f.window_size;
  g.out_degree.assign(f.window_size, 0);
  g.in_degree.assign(f.window_size, 0);
  g.in_support.assign(f.window_size, 0);
  for (std::size_t i = 0; i < f.core.size(); ++i) {
    const Vertex z = f.core[i];
    g.in_support[static_cast<std::size_t>(z)] = 1;
    for (int e = 0; e < 2; ++e) {
      const Vertex t = f.image[e][i];
      if (t == z) throw std::logic_error("doubling map has a fixed point");
      g.edges.push_back({z, t});
      ++g.out_degree[static_cast<std::size_t>(z)];
      if (++g.in_degree[static_cast<std::size_t>(t)] > 1)
        throw std::logic_error("doubling map is not injective");
      g.in_support[static_cast<std::size_t>(t)] = 1;
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<ComponentReport> verify_unicyclic(const OutGraph& g) {
  const std::size_t n = g.vertex_count;
  DisjointSets ds(n);
  for (const auto& e : g.edges) ds.unite(static_cast<std::size_t>(e.from), static_cast<std::size_t>(e.to));
  std::map<std::size_t, std::size_t> index;
  std::vector<ComponentReport> comps;
  for (std::size_t x = 0; x < n; ++x) {
    if (!g.in_support[x]) continue;
    auto [it, inserted] = index.emplace(ds.find(x), comps.size());
    if (inserted) comps.emplace_back();
    comps[it->second].vertices.push_back(static_cast<Vertex>(x));
  }
  std::vector<Vertex> pred(n, kNoVertex);
  std::vector<std::uint32_t> degree(n, 0);
  for (const auto& e : g.edges) {
    ++comps[index.at(ds.find(static_cast<std::size_t>(e.from)))].edge_count;
    pred[static_cast<std::size_t>(e.to)] = e.from;
    ++degree[static_cast<std::size_t>(e.from)];
    ++degree[static_cast<std::size_t>(e.to)];
  }

  // Leaf peeling: what survives is the union of cycles.
  std::vector<std::vector<Vertex>> nbrs(n);
  for (const auto& e : g.edges) {
    nbrs[static_cast<std::size_t>(e.from)].push_back(e.to);
    nbrs[static_cast<std::size_t>(e.to)].push_back(e.from);
  }
  std::vector<char> removed(n, 0);
  std::deque<Vertex> leaves;
  for (std::size_t x = 0; x < n; ++x)
    if (g.in_support[x] && degree[x] <= 1) leaves.push_back(static_cast<Vertex>(x));
  while (!leaves.empty()) {
    const Vertex x = leaves.front();
    leaves.pop_front();
    if (removed[static_cast<std::size_t>(x)]) continue;
    removed[static_cast<std::size_t>(x)] = 1;
    for (Vertex y : nbrs[static_cast<std::size_t>(x)])
      if (!removed[static_cast<std::size_t>(y)] && --degree[static_cast<std::size_t>(y)] <= 1)
        leaves.push_back(y);
  }

  for (auto& c : comps) {
    if (c.edge_count > c.vertices.size())
      throw std::logic_error("component with more edges than vertices: two cycles");
    std::vector<Vertex> on_cycle;
    for (Vertex x : c.vertices)
      if (!removed[static_cast<std::size_t>(x)]) on_cycle.push_back(x);
    if (on_cycle.empty()) continue;
    // Walk in-edges backwards from the smallest cycle vertex; an oriented
    // cycle returns to it after exactly |cycle| steps, staying on the cycle.
    std::vector<char> mark(n, 0);
    for (Vertex x : on_cycle) mark[static_cast<std::size_t>(x)] = 1;
    std::vector<Vertex> back{on_cycle.front()};
    Vertex x = on_cycle.front();
    for (std::size_t step = 0; step < on_cycle.size(); ++step) {
      x = pred[static_cast<std::size_t>(x)];
      if (x == kNoVertex || !mark[static_cast<std::size_t>(x)]) {
        c.cycle_oriented = false;
        break;
      }
      if (step + 1 < on_cycle.size()) back.push_back(x);
    }
    if (c.cycle_oriented && x != on_cycle.front()) c.cycle_oriented = false;
    c.cycle.push_back(back.front());
    for (std::size_t i = back.size(); i-- > 1;) c.cycle.push_back(back[i]);
    if (!c.cycle_oriented) throw std::logic_error("cycle in Gamma is not consistently oriented");
  }
  return comps;
}

ForestPartition cut_loops(const OutGraph& g, const std::vector<ComponentReport>& components) {
  ForestPartition p;
  p.vertex_count = g.vertex_count;
  p.in_support = g.in_support;
  std::vector<DirectedEdge> cuts;
  for (const auto& c : components) {
    ForestComponent fc;
    fc.vertices = c.vertices;
    fc.cycle_length = c.cycle.size();
    if (!c.cycle.empty()) {
      DirectedEdge best{c.cycle.back(), c.cycle.front()};
      for (std::size_t i = 0; i + 1 < c.cycle.size(); ++i)
        best = std::min(best, DirectedEdge{c.cycle[i], c.cycle[i + 1]});
      fc.cut_edge = best;
      cuts.push_back(best);
    }
    p.components.push_back(std::move(fc));
  }
  std::sort(cuts.begin(), cuts.end());
  for (const auto& e : g.edges)
    if (!std::binary_search(cuts.begin(), cuts.end(), e)) p.edges.push_back(e);
  p.valence.assign(g.vertex_count, 0);
  for (const auto& e : p.edges) {
    ++p.valence[static_cast<std::size_t>(e.from)];
    ++p.valence[static_cast<std::size_t>(e.to)];
  }
  return p;
}

ForestPartition cut_loops(const OutGraph& g) { return cut_loops(g, verify_unicyclic(g)); }

ForestStats forest_stats(const ForestPartition& p, const Window& w, const DoublingMap& f,
                         std::size_t samples_per_component) {
  ForestStats s;
  s.max_displacement = f.max_displacement;
  std::size_t trivalent = 0;
  for (std::size_t x = 0; x < p.vertex_count; ++x) {
    if (!p.in_support[x]) continue;
    ++s.valence_histogram[p.valence[x]];
    s.max_valence = std::max(s.max_valence, p.valence[x]);
  }
  for (Vertex z : w.core())
    if (p.valence[static_cast<std::size_t>(z)] == 3) ++trivalent;
  s.trivalent_fraction = w.core().empty() ? 0.0 : static_cast<double>(trivalent) / w.core().size();
  s.component_count = p.components.size();
  for (const auto& c : p.components) ++s.component_sizes[c.vertices.size()];

  DisjointSets ds(p.vertex_count);
  std::vector<std::vector<Vertex>> nbrs(p.vertex_count);
  for (const auto& e : p.edges) {
    if (!ds.unite(static_cast<std::size_t>(e.from), static_cast<std::size_t>(e.to))) s.acyclic = false;
    nbrs[static_cast<std::size_t>(e.from)].push_back(e.to);
    nbrs[static_cast<std::size_t>(e.to)].push_back(e.from);
  }

  std::vector<int> hops(p.vertex_count, -1);
  for (std::size_t ci = 0; ci < p.components.size(); ++ci) {
    const auto& verts = p.components[ci].vertices;
    if (verts.size() < 2) continue;
    std::mt19937_64 rng(0x5eedULL + ci);
    for (std::size_t k = 0; k < samples_per_component; ++k) {
      const Vertex a = verts[uniform_below(rng, verts.size())];
      const Vertex b = verts[uniform_below(rng, verts.size())];
      if (a == b) continue;
      for (Vertex v : verts) hops[static_cast<std::size_t>(v)] = -1;
      std::deque<Vertex> q{a};
      hops[static_cast<std::size_t>(a)] = 0;
      while (!q.empty() && hops[static_cast<std::size_t>(b)] < 0) {
        const Vertex u = q.front();
        q.pop_front();
        for (Vertex v : nbrs[static_cast<std::size_t>(u)])
          if (hops[static_cast<std::size_t>(v)] < 0) {
            hops[static_cast<std::size_t>(v)] = hops[static_cast<std::size_t>(u)] + 1;
            q.push_back(v);
          }
      }
      const Dist d = w.net().distance(a, b);
      if (hops[static_cast<std::size_t>(b)] < 0 || !is_finite(d)) continue;
      s.max_distortion = std::max(s.max_distortion, static_cast<double>(hops[static_cast<std::size_t>(b)]) /
                                                        static_cast<double>(d));
      ++s.distortion_samples;
    }
  }
  return s;
}

namespace {

Dist window_diameter(const Window& w) {
  Dist best = 0;
  for (std::size_t x = 0; x < w.size(); ++x)
    for (Dist d : w.net().distances_from(static_cast<Vertex>(x)))
      if (is_finite(d)) best = std::max(best, d);
  return best;
}

}  // namespace

std::variant<TreeifyResult, DoublingDeficiency> treeify(const Window& w, Dist r_max) {
  if (r_max <= 0) r_max = window_diameter(w);
  const Dist r0 = w.net().r0();
  if (r_max < r0) r_max = r0;

  std::optional<DoublingMap> found;
  std::optional<DoublingDeficiency> last;
  auto attempt = [&](Dist r) {
    DoublingOutcome o = doubling_injection(w, r);
    if (auto* f = std::get_if<DoublingMap>(&o)) {
      found = std::move(*f);
      return true;
    }
    last = std::get<DoublingDeficiency>(std::move(o));
    return false;
  };

  Dist lo = r0 - 1, hi = -1;
  for (Dist r = r0;; r = std::min(2 * r, r_max)) {
    if (attempt(r)) {
      hi = r;
      break;
    }
    lo = r;
    if (r >= r_max) break;
  }
  if (hi < 0) return *last;
  DoublingMap best = *found;
  while (hi - lo > 1) {
    const Dist mid = lo + (hi - lo) / 2;
    if (attempt(mid)) {
      hi = mid;
      best = *found;
    } else {
      lo = mid;
    }
  }

  TreeifyResult res;
  res.radius = hi;
  res.doubling = std::move(best);
  merge_cycles(res.doubling, w);
  res.gamma = build_gamma(res.doubling);
  res.components = verify_unicyclic(res.gamma);
  res.forest = cut_loops(res.gamma, res.components);
  res.stats = forest_stats(res.forest, w, res.doubling);
  return res;
}

namespace {

std::vector<int> component_ids(const ForestPartition& p) {
  std::vector<int> id(p.vertex_count, -1);
  for (std::size_t c = 0; c < p.components.size(); ++c)
    for (Vertex v : p.components[c].vertices) id[static_cast<std::size_t>(v)] = static_cast<int>(c);
  return id;
}

}  // namespace

void write_forest_dot(std::ostream& out, const ForestPartition& p, const Window& w) {
  const auto comp = component_ids(p);
  out << "digraph forest {\n";
  for (std::size_t x = 0; x < p.vertex_count; ++x) {
    if (!p.in_support[x]) continue;
    out << "  " << x << " [component=" << comp[x] << ", valence=" << p.valence[x]
        << ", core=" << (w.in_core(static_cast<Vertex>(x)) ? 1 : 0) << "];\n";
  }
  for (const auto& e : p.edges)
    out << "  " << e.from << " -> " << e.to << " [component=" << comp[static_cast<std::size_t>(e.from)]
        << "];\n";
  for (std::size_t c = 0; c < p.components.size(); ++c)
    if (const auto& cut = p.components[c].cut_edge)
      out << "  " << cut->from << " -> " << cut->to << " [component=" << c
          << ", cut=true, style=dashed];\n";
  out << "}\n";
}

void write_forest_graphml(std::ostream& out, const ForestPartition& p, const Window& w) {
  const auto comp = component_ids(p);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"component\" for=\"all\" attr.name=\"component\" attr.type=\"int\"/>\n"
      << "  <key id=\"valence\" for=\"node\" attr.name=\"valence\" attr.type=\"int\"/>\n"
      << "  <key id=\"core\" for=\"node\" attr.name=\"core\" attr.type=\"boolean\"/>\n"
      << "  <key id=\"cut\" for=\"edge\" attr.name=\"cut\" attr.type=\"boolean\"/>\n"
      << "  <graph id=\"forest\" edgedefault=\"directed\">\n";
  for (std::size_t x = 0; x < p.vertex_count; ++x) {
    if (!p.in_support[x]) continue;
    out << "    <node id=\"n" << x << "\"><data key=\"component\">" << comp[x]
        << "</data><data key=\"valence\">" << p.valence[x] << "</data><data key=\"core\">"
        << (w.in_core(static_cast<Vertex>(x)) ? "true" : "false") << "</data></node>\n";
  }
  auto edge = [&](const DirectedEdge& e, int c, bool cut) {
    out << "    <edge source=\"n" << e.from << "\" target=\"n" << e.to << "\"><data key=\"component\">"
        << c << "</data><data key=\"cut\">" << (cut ? "true" : "false") << "</data></edge>\n";
  };
  for (const auto& e : p.edges) edge(e, comp[static_cast<std::size_t>(e.from)], false);
  for (std::size_t c = 0; c < p.components.size(); ++c)
    if (const auto& cut = p.components[c].cut_edge) edge(*cut, static_cast<int>(c), true);
  out << "  </graph>\n</graphml>\n";
}

}  // namespace coarse
