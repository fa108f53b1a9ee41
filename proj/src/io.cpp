#include "coarse/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace coarse {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank, non-comment line split on whitespace; false at EOF.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::istringstream ss(line);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (tokens.empty() || tokens.front().front() == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kParse, "line " + std::to_string(number_) + ": " + what);
  }

  std::int64_t integer(const std::string& t) const {
    std::int64_t v = 0;
    const char* end = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end) fail("expected an integer, got '" + t + "'");
    return v;
  }

  Vertex vertex(const std::string& t, std::size_t n) const {
    const std::int64_t v = integer(t);
    if (v < 0 || static_cast<std::uint64_t>(v) >= n)
      throw Error(ErrorCode::kUnknownVertex,
                  "line " + std::to_string(number_) + ": vertex " + t + " out of range");
    return static_cast<Vertex>(v);
  }

  Rational rational(const std::string& t) const {
    try {
      return parse_rational(t);
    } catch (const Error&) {
      fail("expected a rational, got '" + t + "'");
    }
  }

  void arity(const std::vector<std::string>& tokens, std::size_t n) const {
    if (tokens.size() != n) fail("expected " + std::to_string(n) + " fields on '" + tokens.front() + "' line");
  }

  void header(std::vector<std::string>& tokens, const std::string& magic, std::size_t fields) {
    if (!next(tokens)) fail("empty file");
    if (tokens.size() < 2 || tokens[0] != magic || tokens[1] != "v1")
      fail("expected header '" + magic + " v1'");
    arity(tokens, fields);
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

struct RawWindow {
  Net net;
  VertexSet core;
  bool has_core = false;
};

RawWindow parse_window(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> t;
  r.header(t, "net", 5);
  const std::int64_t n = r.integer(t[2]);
  if (n < 1) r.fail("vertex count must be positive");
  MetricMode mode;
  if (t[3] == "edges") mode = MetricMode::kEdges;
  else if (t[3] == "lattice") mode = MetricMode::kLattice;
  else r.fail("unknown metric mode '" + t[3] + "'");
  const Dist r0 = r.integer(t[4]);
  const auto size = static_cast<std::size_t>(n);

  std::vector<Point> points(size);
  std::vector<char> seen(size, 0);
  std::size_t dim = 0;
  std::vector<WeightedEdge> edges;
  std::vector<Vertex> core;
  while (r.next(t)) {
    const std::string& kind = t[0];
    if (kind == "v") {
      if (t.size() < 2) r.fail("missing vertex id");
      const Vertex v = r.vertex(t[1], size);
      if (seen[static_cast<std::size_t>(v)]) r.fail("vertex listed twice");
      seen[static_cast<std::size_t>(v)] = 1;
      if (mode == MetricMode::kEdges) {
        r.arity(t, 2);
        continue;
      }
      if (t.size() < 3) r.fail("lattice vertex needs coordinates");
      if (dim == 0) dim = t.size() - 2;
      if (t.size() - 2 != dim) r.fail("inconsistent dimension");
      for (std::size_t i = 2; i < t.size(); ++i) points[static_cast<std::size_t>(v)].push_back(r.integer(t[i]));
    } else if (kind == "e") {
      if (mode != MetricMode::kEdges) r.fail("edge line in a lattice net");
      r.arity(t, 4);
      edges.push_back({r.vertex(t[1], size), r.vertex(t[2], size), r.integer(t[3])});
    } else if (kind == "core") {
      r.arity(t, 2);
      core.push_back(r.vertex(t[1], size));
    } else {
      r.fail("unknown line kind '" + kind + "'");
    }
  }
  if (mode == MetricMode::kLattice && std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw Error(ErrorCode::kParse, "lattice net is missing a vertex line");
  RawWindow raw{mode == MetricMode::kEdges ? Net::from_edges(size, std::move(edges), r0)
                                           : Net::from_points(std::move(points), r0),
                {}, !core.empty()};
  raw.core = make_set(std::move(core));
  return raw;
}

}  // namespace

std::string format_rational(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rational parse_rational(const std::string& text) {
  auto parse = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw Error(ErrorCode::kParse, "bad rational '" + text + "'");
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse(text));
  const std::int64_t num = parse(std::string_view(text).substr(0, slash));
  const std::int64_t den = parse(std::string_view(text).substr(slash + 1));
  if (den <= 0) throw Error(ErrorCode::kParse, "bad denominator in '" + text + "'");
  return Rational(num, den);
}

Window read_window(std::istream& in) {
  RawWindow raw = parse_window(in);
  if (!raw.has_core) return Window::full(raw.net);
  return Window(raw.net, raw.core);
}

Net read_net(std::istream& in) { return parse_window(in).net; }

void write_net(std::ostream& out, const Net& net) {
  out << "net v1 " << net.size() << ' ' << metric_mode_name(net.mode()) << ' ' << net.r0() << '\n';
  for (std::size_t x = 0; x < net.size(); ++x) {
    out << "v " << x;
    if (net.mode() == MetricMode::kLattice)
      for (std::int64_t c : net.point(static_cast<Vertex>(x))) out << ' ' << c;
    out << '\n';
  }
  if (net.mode() == MetricMode::kEdges)
    for (const auto& e : net.edges()) out << "e " << e.u << ' ' << e.v << ' ' << e.length << '\n';
}

void write_window(std::ostream& out, const Window& w) {
  write_net(out, w.net());
  for (Vertex x : w.core()) out << "core " << x << '\n';
}

PartialMap read_partial_map(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> t;
  r.header(t, "map", 4);
  PartialMap m;
  const std::int64_t sn = r.integer(t[2]), tn = r.integer(t[3]);
  if (sn < 1 || tn < 1) r.fail("map sizes must be positive");
  m.source_size = static_cast<std::size_t>(sn);
  m.target_size = static_cast<std::size_t>(tn);
  m.image.assign(m.source_size, kNoVertex);
  while (r.next(t)) {
    if (t[0] != "m") r.fail("unknown line kind '" + t[0] + "'");
    r.arity(t, 3);
    const Vertex x = r.vertex(t[1], m.source_size);
    if (m.image[static_cast<std::size_t>(x)] != kNoVertex) r.fail("source vertex mapped twice");
    m.image[static_cast<std::size_t>(x)] = r.vertex(t[2], m.target_size);
  }
  return m;
}

CoarseMap read_map(std::istream& in, const Net& source, const Net& target) {
  PartialMap m = read_partial_map(in);
  if (m.source_size != source.size() || m.target_size != target.size())
    throw Error(ErrorCode::kDomainMismatch, "map header sizes do not match the nets");
  for (std::size_t x = 0; x < m.image.size(); ++x)
    if (m.image[x] == kNoVertex)
      throw Error(ErrorCode::kParse, "map leaves source vertex " + std::to_string(x) + " undefined");
  return CoarseMap(source, target, std::move(m.image));
}

void write_map(std::ostream& out, const CoarseMap& f) {
  out << "map v1 " << f.source().size() << ' ' << f.target().size() << '\n';
  for (std::size_t x = 0; x < f.table().size(); ++x) out << "m " << x << ' ' << f.table()[x] << '\n';
}

void write_bijection(std::ostream& out, const Bijection& b) {
  out << "map v1 " << b.forward.size() << ' ' << b.backward.size() << '\n';
  for (std::size_t x = 0; x < b.forward.size(); ++x)
    if (b.forward[x] != kNoVertex) out << "m " << x << ' ' << b.forward[x] << '\n';
}

Chain0 read_chain(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> t;
  r.header(t, "chain", 3);
  const std::int64_t n = r.integer(t[2]);
  if (n < 1) r.fail("chain size must be positive");
  Chain0 c(static_cast<std::size_t>(n));
  std::vector<char> seen(c.size(), 0);
  while (r.next(t)) {
    if (t[0] != "c") r.fail("unknown line kind '" + t[0] + "'");
    r.arity(t, 3);
    const Vertex v = r.vertex(t[1], c.size());
    if (seen[static_cast<std::size_t>(v)]) r.fail("vertex listed twice");
    seen[static_cast<std::size_t>(v)] = 1;
    c[v] = r.rational(t[2]);
  }
  return c;
}

void write_chain(std::ostream& out, const Chain0& c) {
  out << "chain v1 " << c.size() << '\n';
  for (std::size_t x = 0; x < c.size(); ++x) {
    const Rational& q = c[static_cast<Vertex>(x)];
    if (q.numerator() != 0) out << "c " << x << ' ' << format_rational(q) << '\n';
  }
}

FlowAssignment read_flow(std::istream& in, std::size_t vertex_count) {
  LineReader r(in);
  std::vector<std::string> t;
  r.header(t, "flow", 4);
  FlowAssignment b;
  b.scale = r.integer(t[2]);
  b.cap = r.integer(t[3]);
  b.vertex_count = vertex_count;
  while (r.next(t)) {
    if (t[0] != "b") r.fail("unknown line kind '" + t[0] + "'");
    r.arity(t, 4);
    EdgeFlow e{r.vertex(t[1], vertex_count), r.vertex(t[2], vertex_count), r.rational(t[3])};
    if (e.u > e.v) {
      std::swap(e.u, e.v);
      e.value = -e.value;
    }
    if (e.u == e.v) r.fail("flow on a loop");
    b.values.push_back(e);
  }
  std::sort(b.values.begin(), b.values.end(),
            [](const EdgeFlow& a, const EdgeFlow& c) { return std::pair(a.u, a.v) < std::pair(c.u, c.v); });
  for (std::size_t i = 1; i < b.values.size(); ++i)
    if (b.values[i].u == b.values[i - 1].u && b.values[i].v == b.values[i - 1].v)
      throw Error(ErrorCode::kParse, "flow lists an edge twice");
  return b;
}

void write_flow(std::ostream& out, const FlowAssignment& b) {
  out << "flow v1 " << b.scale << ' ' << b.cap << '\n';
  for (const auto& e : b.values) out << "b " << e.u << ' ' << e.v << ' ' << format_rational(e.value) << '\n';
}

CertFile read_cert(std::istream& in) {
  LineReader r(in);
  std::vector<std::string> t;
  r.header(t, "cert", 3);
  CertFile c;
  c.kind = t[2];
  bool numbers = false;
  std::vector<Vertex> set;
  while (r.next(t)) {
    if (t[0] == "param") {
      r.arity(t, 3);
      c.params[t[1]] = t[2];
    } else if (t[0] == "S") {
      r.arity(t, 2);
      const std::int64_t v = r.integer(t[1]);
      if (v < 0 || v > std::numeric_limits<Vertex>::max()) r.fail("vertex out of range");
      set.push_back(static_cast<Vertex>(v));
    } else if (t[0] == "numbers") {
      r.arity(t, 3);
      if (numbers) r.fail("numbers given twice");
      c.lhs = r.rational(t[1]);
      c.rhs = r.rational(t[2]);
      numbers = true;
    } else {
      r.fail("unknown line kind '" + t[0] + "'");
    }
  }
  if (!numbers) throw Error(ErrorCode::kParse, "certificate has no numbers line");
  c.set = make_set(std::move(set));
  return c;
}

void write_cert(std::ostream& out, const CertFile& c) {
  out << "cert v1 " << c.kind << '\n';
  for (const auto& [k, v] : c.params) out << "param " << k << ' ' << v << '\n';
  for (Vertex v : c.set) out << "S " << v << '\n';
  out << "numbers " << format_rational(c.lhs) << ' ' << format_rational(c.rhs) << '\n';
}

namespace {

const std::string& param(const CertFile& f, const std::string& key) {
  auto it = f.params.find(key);
  if (it == f.params.end()) throw Error(ErrorCode::kParse, "certificate lacks param '" + key + "'");
  return it->second;
}

std::int64_t int_param(const CertFile& f, const std::string& key) {
  const std::string& text = param(f, key);
  const Rational q = parse_rational(text.size() > 1 && text[0] == '+' ? text.substr(1) : text);
  if (q.denominator() != 1) throw Error(ErrorCode::kParse, "param '" + key + "' must be an integer");
  return q.numerator();
}

std::size_t count_number(const Rational& q) {
  if (q.denominator() != 1 || q < 0) throw Error(ErrorCode::kParse, "expected a nonnegative integer count");
  return static_cast<std::size_t>(q.numerator());
}

void expect_kind(const CertFile& f, const char* kind) {
  if (f.kind != kind) throw Error(ErrorCode::kParse, "expected a '" + std::string(kind) + "' certificate, got '" + f.kind + "'");
}

}  // namespace

CertFile to_cert_file(const ObstructionCert& c) {
  CertFile f;
  f.kind = "obstruction";
  f.params["direction"] = side_name(c.direction);
  f.params["r"] = std::to_string(c.radius);
  f.set = c.set;
  f.lhs = Rational(static_cast<std::int64_t>(c.lhs));
  f.rhs = Rational(static_cast<std::int64_t>(c.rhs));
  return f;
}

CertFile to_cert_file(const ViolationCert& c) {
  CertFile f;
  f.kind = "violation";
  f.params["l"] = std::to_string(c.scale);
  f.params["M"] = std::to_string(c.cap);
  f.params["sign"] = c.sign > 0 ? "+1" : "-1";
  f.params["reason"] = c.reason == ViolationReason::kCut ? "cut" : "zero-sum";
  f.params["cut_edges"] = std::to_string(c.cut_edges);
  f.params["boundary"] = std::to_string(c.boundary_size);
  f.set = c.set;
  f.lhs = c.chain_sum;
  f.rhs = c.cut_capacity;
  return f;
}

CertFile to_cert_file(const DoublingDeficiency& c) {
  CertFile f;
  f.kind = "doubling";
  f.params["r"] = std::to_string(c.radius);
  f.set = c.set;
  f.lhs = Rational(static_cast<std::int64_t>(c.demand));
  f.rhs = Rational(static_cast<std::int64_t>(c.union_size));
  return f;
}

ObstructionCert obstruction_from(const CertFile& f) {
  expect_kind(f, "obstruction");
  ObstructionCert c;
  const std::string& dir = param(f, "direction");
  if (dir == side_name(Side::kInjectivity)) c.direction = Side::kInjectivity;
  else if (dir == side_name(Side::kSurjectivity)) c.direction = Side::kSurjectivity;
  else throw Error(ErrorCode::kParse, "unknown direction '" + dir + "'");
  c.radius = int_param(f, "r");
  c.set = f.set;
  c.lhs = count_number(f.lhs);
  c.rhs = count_number(f.rhs);
  return c;
}

ViolationCert violation_from(const CertFile& f) {
  expect_kind(f, "violation");
  ViolationCert c;
  c.scale = int_param(f, "l");
  c.cap = int_param(f, "M");
  const std::int64_t sign = int_param(f, "sign");
  if (sign != 1 && sign != -1) throw Error(ErrorCode::kParse, "sign must be +1 or -1");
  c.sign = static_cast<int>(sign);
  const std::string& reason = param(f, "reason");
  if (reason == "cut") c.reason = ViolationReason::kCut;
  else if (reason == "zero-sum") c.reason = ViolationReason::kZeroSumRequired;
  else throw Error(ErrorCode::kParse, "unknown reason '" + reason + "'");
  c.cut_edges = static_cast<std::size_t>(int_param(f, "cut_edges"));
  c.boundary_size = static_cast<std::size_t>(int_param(f, "boundary"));
  c.set = f.set;
  c.chain_sum = f.lhs;
  c.cut_capacity = f.rhs;
  return c;
}

DoublingDeficiency doubling_from(const CertFile& f) {
  expect_kind(f, "doubling");
  DoublingDeficiency d;
  d.radius = int_param(f, "r");
  d.set = f.set;
  d.demand = count_number(f.lhs);
  d.union_size = count_number(f.rhs);
  return d;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace coarse
