#include <sstream>

#include "coarse/io.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace coarse;
using namespace testing;

namespace {

template <class W>
std::string dump(W&& writer) {
  std::ostringstream out;
  writer(out);
  return out.str();
}

ErrorCode parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_window(in);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOverflow;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("window round trip is byte-identical") {
  for (const Window& w : {gen_grid(2, 8, 2), gen_random_regular(3, 64, 7, 0.5), gen_regular_tree_ball(3, 3, 1),
                          Window::full(Net::from_edges(3, {{0, 1, 2}, {1, 2, 3}}, 2))}) {
    const std::string text = dump([&](std::ostream& o) { write_window(o, w); });
    std::istringstream in(text);
    Window back = read_window(in);
    CHECK(back.core() == w.core());
    CHECK(back.net().same_space(w.net()));
    CHECK(dump([&](std::ostream& o) { write_window(o, back); }) == text);
  }
  const std::string grid = dump([](std::ostream& o) { write_window(o, gen_grid(2, 8, 2)); });
  CHECK(grid.rfind("net v1 64 lattice 1\n", 0) == 0);
}

TEST_CASE("hand-written files with comments") {
  std::istringstream in("# a path\nnet v1 3 edges 1\n\ne 0 1 1\ne 1 2 1\n# core next\ncore 1\n");
  Window w = read_window(in);
  CHECK(w.size() == 3);
  CHECK(w.core() == VertexSet{1});
  CHECK(w.net().distance(0, 2) == 2);
  std::istringstream no_core("net v1 2 lattice 1\nv 0 0\nv 1 1\n");
  CHECK(read_window(no_core).core() == VertexSet{0, 1});
}

TEST_CASE("malformed files") {
  CHECK(parse_error("") == ErrorCode::kParse);
  CHECK(parse_error("net v2 3 edges 1\n") == ErrorCode::kParse);
  CHECK(parse_error("net v1 3 graph 1\n") == ErrorCode::kParse);
  CHECK(parse_error("net v1 3 edges 1\ne 0 1\n") == ErrorCode::kParse);
  CHECK(parse_error("net v1 3 edges 1\ne 0 7 1\n") == ErrorCode::kUnknownVertex);
  CHECK(parse_error("net v1 3 edges 1\nx 0\n") == ErrorCode::kParse);
  CHECK(parse_error("net v1 2 lattice 1\nv 0 0\n") == ErrorCode::kParse);
  CHECK(parse_error("net v1 2 lattice 1\nv 0 0\nv 1 0\n") == ErrorCode::kDuplicatePoint);
  CHECK(parse_error("net v1 2 lattice 2\nv 0 0\nv 1 1\n") == ErrorCode::kDiscretenessViolation);
  CHECK(parse_error("net v1 2 edges 1\ne 0 1 abc\n") == ErrorCode::kParse);
}

TEST_CASE("maps") {
  Net a = path_net(4), b = path_net(8);
  CoarseMap f = map_from(a, b, [](Vertex x) { return 2 * x; });
  const std::string text = dump([&](std::ostream& o) { write_map(o, f); });
  CHECK(text == "map v1 4 8\nm 0 0\nm 1 2\nm 2 4\nm 3 6\n");
  std::istringstream in(text);
  CHECK(read_map(in, a, b) == f);
  std::istringstream partial("map v1 4 8\nm 1 2\n");
  CHECK_THROWS_AS(read_map(partial, a, b), Error);
  std::istringstream wrong(text);
  CHECK_THROWS_AS(read_map(wrong, b, a), Error);

  Bijection h{{1, kNoVertex, 0}, {2, 0}, {0, 0, 0}};
  CHECK(dump([&](std::ostream& o) { write_bijection(o, h); }) == "map v1 3 2\nm 0 1\nm 2 0\n");
  std::istringstream back("map v1 3 2\nm 0 1\nm 2 0\n");
  CHECK(read_partial_map(back).image == std::vector<Vertex>{1, kNoVertex, 0});
}

TEST_CASE("chains and flows") {
  Chain0 c(5);
  c[1] = Rational(3);
  c[3] = Rational(-2, 7);
  const std::string text = dump([&](std::ostream& o) { write_chain(o, c); });
  CHECK(text == "chain v1 5\nc 1 3\nc 3 -2/7\n");
  std::istringstream in(text);
  CHECK(read_chain(in) == c);
  std::istringstream bad("chain v1 5\nc 1 1/0\n");
  CHECK_THROWS_AS(read_chain(bad), Error);

  FlowAssignment b{2, 3, 5, {{0, 1, Rational(1, 2)}, {1, 4, Rational(-3)}}};
  const std::string ftext = dump([&](std::ostream& o) { write_flow(o, b); });
  CHECK(ftext == "flow v1 2 3\nb 0 1 1/2\nb 1 4 -3\n");
  std::istringstream fin("flow v1 2 3\nb 4 1 3\nb 0 1 1/2\n");
  FlowAssignment r = read_flow(fin, 5);
  CHECK(boundary_of_flow(r) == boundary_of_flow(b));
  CHECK(dump([&](std::ostream& o) { write_flow(o, r); }) == ftext);
}

TEST_CASE("certificates") {
  ObstructionCert oc{Side::kSurjectivity, 3, range_set(0, 8), 17, 12};
  CertFile f = to_cert_file(oc);
  const std::string text = dump([&](std::ostream& o) { write_cert(o, f); });
  CHECK(text.rfind("cert v1 obstruction\n", 0) == 0);
  CHECK(text.find("numbers 17 12\n") != std::string::npos);
  std::istringstream in(text);
  ObstructionCert back = obstruction_from(read_cert(in));
  CHECK(back.direction == oc.direction);
  CHECK(back.set == oc.set);
  CHECK(back.lhs == 17);
  CHECK(back.rhs == 12);

  ViolationCert vc;
  vc.set = {1, 2};
  vc.chain_sum = Rational(-5, 2);
  vc.cut_capacity = Rational(2);
  vc.cut_edges = 2;
  vc.boundary_size = 2;
  vc.sign = -1;
  vc.scale = 1;
  vc.cap = 1;
  std::istringstream vin(dump([&](std::ostream& o) { write_cert(o, to_cert_file(vc)); }));
  ViolationCert vb = violation_from(read_cert(vin));
  CHECK(vb.chain_sum == vc.chain_sum);
  CHECK(vb.sign == -1);
  CHECK(vb.set == vc.set);
  vc.sign = 1;
  std::istringstream pin(dump([&](std::ostream& o) { write_cert(o, to_cert_file(vc)); }));
  CHECK(violation_from(read_cert(pin)).sign == 1);

  DoublingDeficiency dd{2, {4, 5}, 4, 3};
  std::istringstream din(dump([&](std::ostream& o) { write_cert(o, to_cert_file(dd)); }));
  DoublingDeficiency db = doubling_from(read_cert(din));
  CHECK(db.demand == 4);
  CHECK(db.union_size == 3);
  std::istringstream mismatch(dump([&](std::ostream& o) { write_cert(o, to_cert_file(dd)); }));
  CHECK_THROWS_AS(violation_from(read_cert(mismatch)), Error);
}

TEST_CASE("rationals") {
  CHECK(parse_rational("-3") == Q(-3));
  CHECK(parse_rational("6/4") == Q(3, 2));
  CHECK(format_rational(Q(-3, 2)) == "-3/2");
  CHECK_THROWS_AS(parse_rational("1/"), Error);
  CHECK_THROWS_AS(parse_rational("1/-2"), Error);
  CHECK_THROWS_AS(parse_rational("x"), Error);
}

}
