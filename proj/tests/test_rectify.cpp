#include <algorithm>
#include <random>

#include "coarse/rectify.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace coarse;
using namespace testing;

namespace {

struct DoublingInstance {
  Window x;
  Window y;
  CoarseMap f;
  CoarseMap g;
};

// X-window [0..2n] with core [0..n], Y-window [0..2n], f(x) = 2x clipped,
// g(y) = ceil(y/2).
DoublingInstance doubling_instance(int n) {
  Net line = path_net(2 * n + 1);
  Window x(line, range_set(0, n));
  Window y = Window::full(line);
  CoarseMap f = map_from(line, line, [n](Vertex v) { return std::min(2 * v, 2 * n); });
  CoarseMap g = map_from(line, line, [](Vertex v) { return (v + 1) / 2; });
  return {x, y, f, g};
}

// Random 3-regular window with f(x) a random point of the unit ball of x.
std::pair<Window, CoarseMap> perturbed_identity(std::uint64_t seed, int n) {
  Window w = gen_random_regular(3, n, seed);
  std::mt19937_64 rng(seed * 31 + 7);
  CoarseMap f = map_from(w.net(), w.net(), [&](Vertex v) {
    VertexSet b = ball(w.net(), v, w.net().r0());
    return b[uniform_below(rng, b.size())];
  });
  return {w, f};
}

}  // namespace

TEST_SUITE("rectify") {

TEST_CASE("injection near a map") {
  Window w = interval(17, 4, 12);
  CoarseMap id = CoarseMap::identity(w.net());
  NearInjection r0 = injection_near_map(w, w, id, 0);
  REQUIRE(std::holds_alternative<Injection>(r0.outcome));
  for (Vertex v : w.core()) CHECK(std::get<Injection>(r0.outcome).image[static_cast<std::size_t>(v)] == v);

  Window point = Window::full(Net::from_edges(1, {}, 1));
  try {
    injection_near_map(point, point, CoarseMap::identity(point.net()), 0, {true, false});
    FAIL("expected EmptyCandidateSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyCandidateSet);
  }

  NearInjection moved = injection_near_map(w, w, id, 2, {true, false});
  REQUIRE(std::holds_alternative<Injection>(moved.outcome));
  const auto& img = std::get<Injection>(moved.outcome).image;
  CandidateMap oracle;
  oracle.right_size = w.size();
  for (Vertex v : w.core()) {
    const Vertex t = img[static_cast<std::size_t>(v)];
    CHECK(t != v);
    CHECK(w.net().distance(t, v) <= 2);
    VertexSet c = ball(w.net(), v, 2);
    c.erase(std::find(c.begin(), c.end(), v));
    oracle.candidates.push_back(c);
  }
  CHECK(brute_force_injection(oracle));
  CHECK(is_injective(std::get<Injection>(moved.outcome), w.size()));
  CHECK(moved.frame_touching > 0);
}

TEST_CASE("identity rectifies to itself") {
  Window w = Window::full(path_net(9));
  CoarseMap id = CoarseMap::identity(w.net());
  RectifyOutcome o = bijection_near_map(w, w, id, id, 0);
  REQUIRE(std::holds_alternative<RectifiedBijection>(o));
  const auto& b = std::get<RectifiedBijection>(o);
  for (Vertex v = 0; v < 9; ++v) CHECK(b.bijection.forward[static_cast<std::size_t>(v)] == v);
  CHECK(b.displacement == 0);
  CHECK(min_feasible_radius(w, w, id, id, 5).radius == Dist{0});
}

TEST_CASE("doubling map is obstructed on the surjectivity side") {
  DoublingInstance d = doubling_instance(8);
  RectifyOutcome o = bijection_near_map(d.x, d.y, d.f, d.g, 3);
  REQUIRE(std::holds_alternative<ObstructionCert>(o));
  const auto& cert = std::get<ObstructionCert>(o);
  CHECK(cert.direction == Side::kSurjectivity);
  CHECK(cert.set == range_set(0, 8));
  CHECK(cert.lhs == 17);
  CHECK(cert.rhs == 12);
  CHECK(verify_obstruction(d.x, d.y, d.f, d.g, cert));
  ObstructionCert forged = cert;
  forged.rhs = 11;
  CHECK_FALSE(verify_obstruction(d.x, d.y, d.f, d.g, forged));

  RadiusSearch s = min_feasible_radius(d.x, d.y, d.f, d.g, 7);
  CHECK_FALSE(s.radius.has_value());
  REQUIRE(s.last_certificate.has_value());
  CHECK(verify_obstruction(d.x, d.y, d.f, d.g, *s.last_certificate));
}

TEST_CASE("perturbed identity on a random regular graph") {
  auto [w, f] = perturbed_identity(5, 256);
  CoarseMap id = CoarseMap::identity(w.net());
  RectifyOutcome o = bijection_near_map(w, w, f, id, 1);
  REQUIRE(std::holds_alternative<RectifiedBijection>(o));
  const auto& b = std::get<RectifiedBijection>(o);
  CHECK(b.bijection.pair_count() == 256);
  for (Vertex v = 0; v < 256; ++v) {
    const Vertex t = b.bijection.forward[static_cast<std::size_t>(v)];
    CHECK(w.net().distance(t, f(v)) <= b.displacement);
  }
  CHECK(b.displacement <= 2);

  RadiusSearch s = min_feasible_radius(w, w, f, id, 16);
  REQUIRE(s.radius.has_value());
  CHECK(*s.radius <= 2);
  if (*s.radius > 0) {
    RectifyOutcome below = bijection_near_map(w, w, f, id, *s.radius - 1);
    CHECK(std::holds_alternative<ObstructionCert>(below));
  }
  // the rectified bijection is bilipschitz with finite measured constants
  CoarseMap h(w.net(), w.net(), s.bijection->bijection.forward);
  MapStats st = measure_params(h);
  CHECK(st.offset < kInfDist);
}

TEST_CASE("outcome agrees with exhaustive enumeration of constrained injections") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 6));
    Net net = random_graph(rng, n, static_cast<int>(uniform_below(rng, 4)));
    Window w = Window::full(net);
    auto rnd = [&](Vertex v) {
      VertexSet b = ball(net, v, 1);
      return b[uniform_below(rng, b.size())];
    };
    CoarseMap f = map_from(net, net, rnd), g = map_from(net, net, rnd);
    const Dist r = static_cast<Dist>(uniform_below(rng, 3));
    auto near = [&](const CoarseMap& m) {
      CandidateMap p;
      p.right_size = net.size();
      for (Vertex v = 0; v < n; ++v) p.candidates.push_back(ball(net, m(v), r));
      return brute_force_injection(p);
    };
    const bool expect = near(f) && near(g);
    RectifyOutcome o = bijection_near_map(w, w, f, g, r);
    CHECK(std::holds_alternative<RectifiedBijection>(o) == expect);
    if (auto* c = std::get_if<ObstructionCert>(&o)) CHECK(verify_obstruction(w, w, f, g, *c));
  }
}

}
