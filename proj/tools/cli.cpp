#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "coarse/expansion.hpp"
#include "coarse/generators.hpp"
#include "coarse/io.hpp"
#include "coarse/rectify.hpp"
#include "coarse/tree_partition.hpp"
#include "coarse/uf_flow.hpp"
#include "json.hpp"

#ifndef COARSE_VERSION
#define COARSE_VERSION "0.0.0"
#endif

namespace coarse::cli {

const char* version() { return COARSE_VERSION; }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inputs read and outputs written by one command, for the run record.
struct Session {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, std::string>> outputs;
  std::optional<std::uint64_t> seed;

  std::string read(const std::string& path) {
    std::string bytes = slurp(path);
    inputs.emplace_back(path, fnv1a_hex(bytes));
    return bytes;
  }

  void emit(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
      out << bytes;
    } else {
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      if (!f) throw UsageError("cannot write " + path);
      f << bytes;
    }
    outputs.emplace_back(path.empty() ? "-" : path, fnv1a_hex(bytes));
  }

  Window window(const std::string& path) {
    std::istringstream in(read(path));
    return read_window(in);
  }

  CoarseMap map(const std::string& path, const Net& src, const Net& dst) {
    std::istringstream in(read(path));
    return read_map(in, src, dst);
  }

  Chain0 chain(const std::string& path) {
    std::istringstream in(read(path));
    return read_chain(in);
  }
};

template <class F>
std::string render(F&& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

std::string fixed(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

std::int64_t parse_int(const std::string& t) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    throw UsageError("bad integer '" + t + "' in range");
  }
  if (used != t.size()) throw UsageError("bad integer '" + t + "' in range");
  return v;
}

// Comma-separated items, each `a`, `a:b`, `a:b:step` or `a:b:*factor`
// (inclusive bounds).
std::vector<std::int64_t> parse_range(const std::string& text, const std::string& name) {
  std::vector<std::int64_t> out;
  std::stringstream items(text);
  for (std::string item; std::getline(items, item, ',');) {
    if (item.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ps(item);
    for (std::string p; std::getline(ps, p, ':');) parts.push_back(p);
    if (parts.size() == 1) {
      out.push_back(parse_int(parts[0]));
      continue;
    }
    if (parts.size() > 3) throw UsageError("bad range item '" + item + "' for " + name);
    const std::int64_t lo = parse_int(parts[0]), hi = parse_int(parts[1]);
    bool geometric = false;
    std::int64_t step = 1;
    if (parts.size() == 3) {
      geometric = !parts[2].empty() && parts[2][0] == '*';
      step = parse_int(geometric ? parts[2].substr(1) : parts[2]);
      if (step < (geometric ? 2 : 1)) throw UsageError("bad step in '" + item + "' for " + name);
    }
    for (std::int64_t v = lo; v <= hi; v = geometric ? v * step : v + step) {
      out.push_back(v);
      if (geometric && v <= 0) throw UsageError("geometric range must start positive");
    }
  }
  if (out.empty()) throw UsageError("empty range for " + name);
  return out;
}

// ---------------------------------------------------------------- gen

struct GenOptions {
  int d = 2, n = 8, margin = 1, valence = 3, depth = 3, rank = 2, radius = 2;
  std::uint64_t seed = 0;
  double core_fraction = 1.0;
  std::string window, input, x, y, kind = "identity", map_out;
  std::int64_t r0 = 1, factor = 2, lo = -1, hi = -1, perturb = 1;
  std::string out;
};

int cmd_gen(Session& s, const std::string& family, const GenOptions& o) {
  if (family == "grid") {
    s.emit(o.out, render([&](std::ostream& f) { write_window(f, gen_grid(o.d, o.n, o.margin)); }));
  } else if (family == "tree") {
    s.emit(o.out, render([&](std::ostream& f) { write_window(f, gen_regular_tree_ball(o.valence, o.depth, o.margin)); }));
  } else if (family == "free") {
    s.emit(o.out, render([&](std::ostream& f) { write_window(f, gen_free_group_ball(o.rank, o.radius, o.margin)); }));
  } else if (family == "rr") {
    s.seed = o.seed;
    s.emit(o.out, render([&](std::ostream& f) { write_window(f, gen_random_regular(o.d, o.n, o.seed, o.core_fraction)); }));
  } else if (family == "line") {
    if (o.n < 1) throw UsageError("--n must be positive");
    std::vector<WeightedEdge> edges;
    for (int i = 0; i + 1 < o.n; ++i) edges.push_back({i, i + 1, 1});
    const Net net = Net::from_edges(static_cast<std::size_t>(o.n), edges, 1);
    const std::int64_t lo = o.lo < 0 ? 0 : o.lo, hi = o.hi < 0 ? o.n - 1 : o.hi;
    if (lo > hi || hi >= o.n) throw UsageError("core range outside the line");
    VertexSet core;
    for (std::int64_t v = lo; v <= hi; ++v) core.push_back(static_cast<Vertex>(v));
    s.emit(o.out, render([&](std::ostream& f) { write_window(f, Window(net, core)); }));
  } else if (family == "double") {
    const ProductDouble d = gen_product_double(s.window(o.window));
    s.emit(o.out, render([&](std::ostream& f) { write_window(f, d.window); }));
    if (!o.map_out.empty()) s.emit(o.map_out, render([&](std::ostream& f) { write_map(f, d.projection); }));
  } else if (family == "points") {
    std::istringstream in(s.read(o.input));
    std::vector<Point> pts;
    for (std::string line; std::getline(in, line);) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      Point p;
      for (std::int64_t c; ls >> c;) p.push_back(c);
      if (!ls.eof()) throw Error(ErrorCode::kParse, "bad coordinate line '" + line + "'");
      if (!p.empty()) pts.push_back(std::move(p));
    }
    s.emit(o.out, render([&](std::ostream& f) { write_window(f, net_from_points(std::move(pts), o.r0, o.margin)); }));
  } else if (family == "map") {
    const Window x = s.window(o.x);
    const Window y = s.window(o.y);
    const auto ny = static_cast<Vertex>(y.size());
    std::vector<Vertex> table(x.size());
    if (o.kind == "identity") {
      for (std::size_t v = 0; v < table.size(); ++v) table[v] = std::min(static_cast<Vertex>(v), ny - 1);
    } else if (o.kind == "scale") {
      // Vertex ids read as positions, as on generated lines.
      for (std::size_t v = 0; v < table.size(); ++v)
        table[v] = static_cast<Vertex>(std::min<std::int64_t>(static_cast<std::int64_t>(v) * o.factor, ny - 1));
    } else if (o.kind == "halve") {
      for (std::size_t v = 0; v < table.size(); ++v)
        table[v] = static_cast<Vertex>(std::min<std::int64_t>((static_cast<std::int64_t>(v) + 1) / 2, ny - 1));
    } else if (o.kind == "perturb") {
      if (!x.net().same_space(y.net()) && x.size() != y.size())
        throw UsageError("perturb needs the same vertex set on both sides");
      s.seed = o.seed;
      std::mt19937_64 rng(o.seed);
      for (std::size_t v = 0; v < table.size(); ++v) {
        const VertexSet b = ball(y.net(), static_cast<Vertex>(v), o.perturb);
        table[v] = b[uniform_below(rng, b.size())];
      }
    } else {
      throw UsageError("unknown map kind '" + o.kind + "'");
    }
    s.emit(o.out, render([&](std::ostream& f) { write_map(f, CoarseMap(x.net(), y.net(), std::move(table))); }));
  } else {
    throw UsageError("unknown family '" + family + "'");
  }
  return kExitWitness;
}

// ---------------------------------------------------------------- biject

struct BijectOptions {
  std::string x, y, f, g, out;
  std::optional<Dist> r, rmax;
};

int cmd_biject(Session& s, const BijectOptions& o) {
  if (o.r.has_value() == o.rmax.has_value()) throw UsageError("give exactly one of --r and --rmax");
  const Window x = s.window(o.x);
  const Window y = s.window(o.y);
  const CoarseMap f = s.map(o.f, x.net(), y.net());
  const CoarseMap g = o.g.empty() ? nearest_inverse(f, x.core()) : s.map(o.g, y.net(), x.net());

  std::optional<RectifiedBijection> found;
  std::optional<ObstructionCert> cert;
  if (o.r) {
    RectifyOutcome r = bijection_near_map(x, y, f, g, *o.r);
    if (auto* b = std::get_if<RectifiedBijection>(&r)) found = std::move(*b);
    else cert = std::get<ObstructionCert>(r);
  } else {
    RadiusSearch search = min_feasible_radius(x, y, f, g, *o.rmax);
    if (search.radius) {
      found = std::move(search.bijection);
      s.err << "minimal radius " << *search.radius << "\n";
    } else {
      cert = search.last_certificate;
      s.err << "no radius <= " << *o.rmax << "\n";
    }
  }
  if (found) {
    s.emit(o.out, render([&](std::ostream& f) { write_bijection(f, found->bijection); }));
    s.err << "bijection pairs " << found->bijection.pair_count() << " radius " << found->radius
          << " displacement " << found->displacement << "\n";
    return kExitWitness;
  }
  s.emit(o.out, render([&](std::ostream& f) { write_cert(f, to_cert_file(*cert)); }));
  s.err << "obstruction " << side_name(cert->direction) << " |S| " << cert->set.size() << ": " << cert->lhs
        << " > " << cert->rhs << "\n";
  return kExitCertificate;
}

// ---------------------------------------------------------------- bound

struct BoundOptions {
  std::string window, chain, mode = "integer", out;
  Dist l = 1;
  std::int64_t m = 1;
};

ChainMode parse_mode(const std::string& m) {
  if (m == "integer") return ChainMode::kInteger;
  if (m == "rational") return ChainMode::kRational;
  throw UsageError("--mode must be integer or rational");
}

int cmd_bound(Session& s, const BoundOptions& o) {
  const Window w = s.window(o.window);
  const Chain0 c = o.chain.empty() ? unit_chain(w) : s.chain(o.chain);
  if (c.size() != w.size()) throw Error(ErrorCode::kDomainMismatch, "chain size differs from window");
  BoundOutcome r = bound_certificate(c, o.l, o.m, w, parse_mode(o.mode));
  if (auto* b = std::get_if<FlowAssignment>(&r)) {
    s.emit(o.out, render([&](std::ostream& f) { write_flow(f, *b); }));
    s.err << "flow edges " << b->values.size() << "\n";
    return kExitWitness;
  }
  const auto& v = std::get<ViolationCert>(r);
  s.emit(o.out, render([&](std::ostream& f) { write_cert(f, to_cert_file(v)); }));
  s.err << "violation |S| " << v.set.size() << ": |" << format_rational(v.chain_sum) << "| > "
        << format_rational(v.cut_capacity) << "\n";
  return kExitCertificate;
}

// ---------------------------------------------------------------- treeify

struct TreeifyOptions {
  std::string window, dot, graphml, out;
  Dist rmax = 0;
};

std::string stats_text(const TreeifyResult& t) {
  std::ostringstream s;
  const ForestStats& st = t.stats;
  s << "radius " << t.radius << "\n";
  s << "components " << st.component_count << "\n";
  std::size_t cuts = 0;
  for (const auto& c : t.forest.components) cuts += c.cut_edge.has_value();
  s << "cut_edges " << cuts << "\n";
  s << "forest_edges " << t.forest.edges.size() << "\n";
  s << "trivalent_fraction " << fixed(st.trivalent_fraction) << "\n";
  s << "max_valence " << st.max_valence << "\n";
  for (auto [v, k] : st.valence_histogram) s << "valence " << v << " " << k << "\n";
  for (auto [size, k] : st.component_sizes) s << "component_size " << size << " " << k << "\n";
  s << "max_displacement " << st.max_displacement << "\n";
  s << "max_distortion " << fixed(st.max_distortion) << "\n";
  s << "distortion_samples " << st.distortion_samples << "\n";
  s << "acyclic " << (st.acyclic ? "true" : "false") << "\n";
  return s.str();
}

int cmd_treeify(Session& s, const TreeifyOptions& o) {
  const Window w = s.window(o.window);
  auto r = treeify(w, o.rmax);
  if (auto* d = std::get_if<DoublingDeficiency>(&r)) {
    s.emit(o.out, render([&](std::ostream& f) { write_cert(f, to_cert_file(*d)); }));
    s.err << "doubling deficiency at radius " << d->radius << ": " << d->demand << " > " << d->union_size << "\n";
    return kExitCertificate;
  }
  const auto& t = std::get<TreeifyResult>(r);
  s.emit(o.out, stats_text(t));
  if (!o.dot.empty()) s.emit(o.dot, render([&](std::ostream& f) { write_forest_dot(f, t.forest, w); }));
  if (!o.graphml.empty()) s.emit(o.graphml, render([&](std::ostream& f) { write_forest_graphml(f, t.forest, w); }));
  return kExitWitness;
}

// ---------------------------------------------------------------- profile

struct ProfileOptions {
  std::string window, radii = "1", out;
  std::size_t budget = 1000;
};

int cmd_profile(Session& s, const ProfileOptions& o) {
  const Window w = s.window(o.window);
  const auto radii = parse_range(o.radii, "--r");
  for (auto r : radii)
    if (r < 0) throw UsageError("radii must be nonnegative");
  const GeometryProfile g = geometry_profile(w.net(), *std::max_element(radii.begin(), radii.end()));
  std::ostringstream csv;
  csv << "r,max_ball,ratio,ratio_decimal,set_size,boundary_size,method\n";
  for (auto r : radii) {
    const ExpansionReport rep = folner_search(w, r, o.budget);
    csv << r << ',' << g.at(r) << ',' << format_rational(rep.ratio) << ','
        << fixed(boost::rational_cast<double>(rep.ratio)) << ',' << rep.set.size() << ',' << rep.boundary_size
        << ',' << search_method_name(rep.method) << "\n";
  }
  s.emit(o.out, csv.str());
  return kExitWitness;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
  std::string family = "grid", n = "16,32,64", l = "1", seeds = "0", out;
  int d = 2, margin = -1;
  double core_fraction = 0.5;
  std::int64_t m_max = 4096;
};

constexpr const char* kSweepColumns = "family,n,seed,l,margin,window_size,core_size,feasible,min_M";

int cmd_sweep(Session& s, const SweepOptions& o) {
  const auto ns = parse_range(o.n, "--n");
  const auto ls = parse_range(o.l, "--l");
  const auto seeds = parse_range(o.seeds, "--seeds");
  if (o.family != "grid" && o.family != "rr" && o.family != "tree" && o.family != "free")
    throw UsageError("unknown family '" + o.family + "'");
  if (o.m_max < 1) throw UsageError("--M-max must be positive");
  struct Job {
    std::int64_t n, l, seed;
  };
  std::vector<Job> jobs;
  const bool seeded = o.family == "rr";
  for (auto n : ns)
    for (auto l : ls)
      for (auto seed : seeded ? seeds : std::vector<std::int64_t>{0}) jobs.push_back({n, l, seed});
  if (seeded) s.seed = static_cast<std::uint64_t>(seeds.front());

  std::vector<std::string> rows(jobs.size());
  std::vector<std::string> failures(jobs.size());
  auto run_job = [&](std::size_t i) {
    const Job& j = jobs[i];
    const int margin = o.margin >= 0 ? o.margin : static_cast<int>(std::max<std::int64_t>(1, j.l));
    try {
      Window w = o.family == "grid"   ? gen_grid(o.d, static_cast<int>(j.n), margin)
                 : o.family == "tree" ? gen_regular_tree_ball(3, static_cast<int>(j.n), margin)
                 : o.family == "free" ? gen_free_group_ball(2, static_cast<int>(j.n), margin)
                                      : gen_random_regular(3, static_cast<int>(j.n), static_cast<std::uint64_t>(j.seed),
                                                           o.core_fraction);
      const VanishingResult v = vanishing_test(w, j.l, o.m_max);
      std::ostringstream row;
      row << o.family << ',' << j.n << ',' << j.seed << ',' << j.l << ',' << (o.family == "rr" ? 0 : margin) << ','
          << w.size() << ',' << w.core().size() << ',' << (v.minimal_cap ? "true" : "false") << ','
          << (v.minimal_cap ? std::to_string(*v.minimal_cap) : "") << "\n";
      rows[i] = row.str();
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  };

  const char* env = std::getenv("COARSE_THREADS");
  const int threads = env ? std::max(1, std::atoi(env)) : 1;
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < jobs.size();) run_job(i);
    });
  for (std::size_t i; (i = next++) < jobs.size();) run_job(i);
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < jobs.size(); ++i)
    if (!failures[i].empty())
      throw UsageError("instance n=" + std::to_string(jobs[i].n) + " l=" + std::to_string(jobs[i].l) + ": " +
                       failures[i]);
  std::string csv = std::string(kSweepColumns) + "\n";
  for (const auto& r : rows) csv += r;
  s.emit(o.out, csv);
  return kExitWitness;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  std::string cert, flow, bijection, window, chain, x, y, f, g;
  std::optional<Dist> r;
};

int verdict(Session& s, bool ok, const std::string& what) {
  s.out << (ok ? "verified " : "rejected ") << what << "\n";
  return ok ? kExitWitness : kExitInternal;
}

int cmd_verify(Session& s, const VerifyOptions& o) {
  const int given = !o.cert.empty() + !o.flow.empty() + !o.bijection.empty();
  if (given != 1) throw UsageError("give exactly one of --cert, --flow and --bijection");
  auto need = [](const std::string& v, const char* flag) {
    if (v.empty()) throw UsageError(std::string("missing ") + flag);
  };
  auto maps = [&](const Window& x, const Window& y) {
    need(o.f, "--f");
    CoarseMap f = s.map(o.f, x.net(), y.net());
    CoarseMap g = o.g.empty() ? nearest_inverse(f, x.core()) : s.map(o.g, y.net(), x.net());
    return std::pair(std::move(f), std::move(g));
  };

  if (!o.cert.empty()) {
    std::istringstream in(s.read(o.cert));
    const CertFile file = read_cert(in);
    if (file.kind == "obstruction") {
      need(o.x, "--x");
      need(o.y, "--y");
      const Window x = s.window(o.x), y = s.window(o.y);
      auto [f, g] = maps(x, y);
      return verdict(s, verify_obstruction(x, y, f, g, obstruction_from(file)), "obstruction certificate");
    }
    need(o.window, "--window");
    const Window w = s.window(o.window);
    if (file.kind == "violation") {
      const Chain0 c = o.chain.empty() ? unit_chain(w) : s.chain(o.chain);
      return verdict(s, verify_violation(violation_from(file), c, w), "violation certificate");
    }
    if (file.kind == "doubling")
      return verdict(s, verify_doubling_deficiency(w, doubling_from(file)), "doubling certificate");
    throw UsageError("unknown certificate kind '" + file.kind + "'");
  }

  if (!o.flow.empty()) {
    need(o.window, "--window");
    const Window w = s.window(o.window);
    const Chain0 c = o.chain.empty() ? unit_chain(w) : s.chain(o.chain);
    std::istringstream in(s.read(o.flow));
    return verdict(s, verify_flow(read_flow(in, w.size()), c, w), "flow");
  }

  need(o.x, "--x");
  need(o.y, "--y");
  if (!o.r) throw UsageError("missing --r");
  const Window x = s.window(o.x), y = s.window(o.y);
  auto [f, g] = maps(x, y);
  std::istringstream in(s.read(o.bijection));
  const PartialMap h = read_partial_map(in);
  if (h.source_size != x.size() || h.target_size != y.size()) return verdict(s, false, "bijection (sizes)");
  std::vector<char> hit(y.size(), 0);
  for (std::size_t v = 0; v < h.image.size(); ++v) {
    const Vertex t = h.image[v];
    if (t == kNoVertex) {
      if (x.in_core(static_cast<Vertex>(v))) return verdict(s, false, "bijection (core vertex unpaired)");
      continue;
    }
    if (hit[static_cast<std::size_t>(t)]++) return verdict(s, false, "bijection (not injective)");
    const bool near_f = y.net().distance(t, f(static_cast<Vertex>(v))) <= *o.r;
    const bool near_g = x.net().distance(static_cast<Vertex>(v), g(t)) <= *o.r;
    if (!near_f && !near_g) return verdict(s, false, "bijection (pair too far from f and g)");
  }
  for (Vertex t : y.core())
    if (!hit[static_cast<std::size_t>(t)]) return verdict(s, false, "bijection (target core vertex unpaired)");
  return verdict(s, true, "bijection");
}

// ---------------------------------------------------------------- records

nlohmann::json record_json(const std::vector<std::string>& args, const Session& s, int code, double ms) {
  nlohmann::json j;
  j["version"] = version();
  j["argv"] = args;
  auto files = [](const std::vector<std::pair<std::string, std::string>>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& [p, h] : v) a.push_back({{"path", p}, {"fnv1a64", h}});
    return a;
  };
  j["inputs"] = files(s.inputs);
  j["outputs"] = files(s.outputs);
  j["seed"] = s.seed ? nlohmann::json(*s.seed) : nlohmann::json(nullptr);
  j["exit_code"] = code;
  j["wall_time_ms"] = ms;
  return j;
}

int dispatch(const std::vector<std::string>& args, Session& s);

int cmd_replay(Session& s, const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad run record: ") + e.what());
  }
  const auto args = j.at("argv").get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay") throw UsageError("refusing to replay a replay");
  for (const auto& in : j.at("inputs")) {
    const std::string p = in.at("path");
    if (fnv1a_hex(slurp(p)) != in.at("fnv1a64").get<std::string>()) {
      s.err << "input changed since recording: " << p << "\n";
      return kExitInternal;
    }
  }
  std::ostringstream captured, diag;
  Session inner{captured, diag, {}, {}, {}};
  const int code = dispatch(args, inner);
  bool same = code == j.at("exit_code").get<int>();
  const auto& recorded = j.at("outputs");
  same = same && recorded.size() == inner.outputs.size();
  for (std::size_t i = 0; same && i < recorded.size(); ++i)
    same = recorded[i].at("path").get<std::string>() == inner.outputs[i].first &&
           recorded[i].at("fnv1a64").get<std::string>() == inner.outputs[i].second;
  s.out << (same ? "replay identical" : "replay differs") << " (" << inner.outputs.size() << " outputs, exit "
        << code << ")\n";
  return same ? kExitWitness : kExitInternal;
}

// ---------------------------------------------------------------- parsing

int dispatch(const std::vector<std::string>& args, Session& s) {
  CLI::App app{"Coarse geometry on finite windows of uniformly discrete spaces", "coarse"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version());
  std::string record_path;
  app.add_option("--record", record_path, "Write a JSON run record (argv, input/output hashes, seed, timing)");
  app.footer(
      "Exit codes: 0 witness produced, 3 certificate produced, 2 usage error, 1 internal error or rejected "
      "verification.");

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "Generate windows and maps");
  gen->require_subcommand(1);
  auto out_opt = [](CLI::App* c, std::string& target) { c->add_option("-o,--out", target, "Output file (default stdout)"); };
  auto* g_grid = gen->add_subcommand("grid", "Lattice [0,n)^d, L1 metric");
  g_grid->add_option("--d", go.d, "Dimension")->capture_default_str();
  g_grid->add_option("--n", go.n, "Side length")->capture_default_str();
  g_grid->add_option("--margin", go.margin, "Frame width")->capture_default_str();
  out_opt(g_grid, go.out);
  auto* g_tree = gen->add_subcommand("tree", "Ball in the regular tree");
  g_tree->add_option("--valence", go.valence)->capture_default_str();
  g_tree->add_option("--depth", go.depth)->capture_default_str();
  g_tree->add_option("--margin", go.margin)->capture_default_str();
  out_opt(g_tree, go.out);
  auto* g_free = gen->add_subcommand("free", "Cayley ball of a free group");
  g_free->add_option("--rank", go.rank)->capture_default_str();
  g_free->add_option("--radius", go.radius)->capture_default_str();
  g_free->add_option("--margin", go.margin)->capture_default_str();
  out_opt(g_free, go.out);
  auto* g_rr = gen->add_subcommand("rr", "Random d-regular graph (pairing model)");
  g_rr->add_option("--d", go.d)->capture_default_str();
  g_rr->add_option("--n", go.n)->capture_default_str();
  g_rr->add_option("--seed", go.seed)->capture_default_str();
  g_rr->add_option("--core-fraction", go.core_fraction, "Core = first fraction of vertices in BFS order")
      ->capture_default_str();
  out_opt(g_rr, go.out);
  auto* g_line = gen->add_subcommand("line", "Unit path on n vertices");
  g_line->add_option("--n", go.n)->capture_default_str();
  g_line->add_option("--core-lo", go.lo, "First core vertex (default 0)");
  g_line->add_option("--core-hi", go.hi, "Last core vertex (default n-1)");
  out_opt(g_line, go.out);
  auto* g_double = gen->add_subcommand("double", "Product W x {0,1}");
  g_double->add_option("--window", go.window)->required();
  g_double->add_option("--map", go.map_out, "Also write the projection map here");
  out_opt(g_double, go.out);
  auto* g_points = gen->add_subcommand("points", "Lattice net from a file of integer coordinates");
  g_points->add_option("--input", go.input)->required();
  g_points->add_option("--r0", go.r0)->capture_default_str();
  g_points->add_option("--margin", go.margin)->capture_default_str();
  out_opt(g_points, go.out);
  auto* g_map = gen->add_subcommand("map", "Map between two windows");
  g_map->add_option("--x", go.x, "Source window")->required();
  g_map->add_option("--y", go.y, "Target window")->required();
  g_map->add_option("--kind", go.kind, "identity | scale | halve | perturb")->capture_default_str();
  g_map->add_option("--factor", go.factor, "scale: x -> factor*x, clipped")->capture_default_str();
  g_map->add_option("--perturb-radius", go.perturb, "perturb: random point of this ball")->capture_default_str();
  g_map->add_option("--seed", go.seed)->capture_default_str();
  out_opt(g_map, go.out);

  BijectOptions bo;
  auto* biject = app.add_subcommand("biject", "Bijection near a quasi-isometry, or an obstruction certificate");
  biject->add_option("--x", bo.x)->required();
  biject->add_option("--y", bo.y)->required();
  biject->add_option("--f", bo.f)->required();
  biject->add_option("--g", bo.g, "Coarse inverse (default: nearest inverse of f)");
  biject->add_option("--r", bo.r, "Radius");
  biject->add_option("--rmax", bo.rmax, "Search the least radius up to this bound");
  out_opt(biject, bo.out);

  BoundOptions bn;
  auto* bound = app.add_subcommand("bound", "Decide whether a 0-chain bounds at caps (l, M)");
  bound->add_option("--window", bn.window)->required();
  bound->add_option("--chain", bn.chain, "Chain file (default: 1 on the core)");
  bound->add_option("--l", bn.l)->capture_default_str();
  bound->add_option("--M", bn.m)->capture_default_str();
  bound->add_option("--mode", bn.mode, "integer | rational")->capture_default_str();
  out_opt(bound, bn.out);

  TreeifyOptions to;
  auto* tree = app.add_subcommand("treeify", "Partition a window into near-trivalent forests");
  tree->add_option("--window", to.window)->required();
  tree->add_option("--rmax", to.rmax, "Largest radius to try (0: window diameter)")->capture_default_str();
  tree->add_option("--dot", to.dot, "Write the forest as DOT");
  tree->add_option("--graphml", to.graphml, "Write the forest as GraphML");
  out_opt(tree, to.out);

  ProfileOptions po;
  auto* profile = app.add_subcommand("profile", "Ball growth and best Folner ratio per radius");
  profile->add_option("--window", po.window)->required();
  profile->add_option("--r", po.radii, "Radii, e.g. 1,2,3 or 1:4")->capture_default_str();
  profile->add_option("--budget", po.budget, "Local-search steps")->capture_default_str();
  profile->footer("CSV columns: r,max_ball,ratio,ratio_decimal,set_size,boundary_size,method");
  out_opt(profile, po.out);

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "Minimal cap M for [core] across a family");
  sweep->add_option("--family", so.family, "grid | rr | tree | free")->capture_default_str();
  sweep->add_option("--n", so.n, "Sizes: a,b,c or lo:hi[:step] or lo:hi:*factor")->capture_default_str();
  sweep->add_option("--l", so.l, "Scales")->capture_default_str();
  sweep->add_option("--seeds", so.seeds, "Seeds (rr only)")->capture_default_str();
  sweep->add_option("--d", so.d, "Grid dimension")->capture_default_str();
  sweep->add_option("--margin", so.margin, "Frame width (default max(1, l))");
  sweep->add_option("--core-fraction", so.core_fraction, "rr core fraction")->capture_default_str();
  sweep->add_option("--M-max", so.m_max, "Largest cap searched")->capture_default_str();
  sweep->footer(std::string("CSV columns: ") + kSweepColumns +
                "\nRows are ordered by n, then l, then seed. COARSE_THREADS sets the worker count.");
  out_opt(sweep, so.out);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Re-check a witness or certificate from the input files alone");
  verify->add_option("--cert", vo.cert);
  verify->add_option("--flow", vo.flow);
  verify->add_option("--bijection", vo.bijection);
  verify->add_option("--window", vo.window);
  verify->add_option("--chain", vo.chain);
  verify->add_option("--x", vo.x);
  verify->add_option("--y", vo.y);
  verify->add_option("--f", vo.f);
  verify->add_option("--g", vo.g);
  verify->add_option("--r", vo.r);

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "Re-run a recorded command and compare output hashes");
  replay->add_option("record", replay_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, s.out, s.err);
    return code == 0 ? kExitWitness : kExitUsage;
  }

  if (*gen)
    for (auto* sub : gen->get_subcommands()) return cmd_gen(s, sub->get_name(), go);
  if (*biject) return cmd_biject(s, bo);
  if (*bound) return cmd_bound(s, bn);
  if (*tree) return cmd_treeify(s, to);
  if (*profile) return cmd_profile(s, po);
  if (*sweep) return cmd_sweep(s, so);
  if (*verify) return cmd_verify(s, vo);
  if (*replay) return cmd_replay(s, replay_path);
  throw UsageError("no command");
}

// Splits off --record so that the recorded argv replays without rewriting
// the record itself.
std::string take_record(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--record" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--record=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  return path;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = raw_args;
  const std::string record = take_record(args);
  Session s{out, err, {}, {}, {}};
  const auto start = std::chrono::steady_clock::now();
  int code = kExitInternal;
  try {
    code = dispatch(args, s);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool internal = e.code() == ErrorCode::kOverflow || e.code() == ErrorCode::kGenerationFailed;
    code = internal ? kExitInternal : kExitUsage;
    if (!internal) return code;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    code = kExitInternal;
  }
  if (!record.empty()) {
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::ofstream f(record, std::ios::binary | std::ios::trunc);
    if (!f) {
      err << "cannot write run record " << record << "\n";
      return kExitInternal;
    }
    f << record_json(args, s, code, ms).dump(2) << "\n";
  }
  return code;
}

}  // namespace coarse::cli
