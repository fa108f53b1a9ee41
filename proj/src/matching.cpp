#include "coarse/matching.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace coarse {

namespace {

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const CandidateMap& p)
      : p_(p), match_left_(p.left_size(), kNoVertex), match_right_(p.right_size, kNoVertex) {}

  // Augments using only right vertices accepted by `allowed` (all if empty).
  void run(std::span<const char> allowed) {
    allowed_ = allowed;
    while (bfs()) {
      std::fill(it_.begin(), it_.end(), 0);
      for (std::size_t u = 0; u < p_.left_size(); ++u)
        if (match_left_[u] == kNoVertex) dfs(static_cast<Vertex>(u));
    }
  }

  const std::vector<Vertex>& match_left() const { return match_left_; }
  const std::vector<Vertex>& match_right() const { return match_right_; }

 private:
  bool usable(Vertex v) const {
    return allowed_.empty() || allowed_[static_cast<std::size_t>(v)] != 0;
  }

  bool bfs() {
    const std::size_t n = p_.left_size();
    dist_.assign(n, -1);
    it_.assign(n, 0);
    std::deque<Vertex> q;
    for (std::size_t u = 0; u < n; ++u) {
      if (match_left_[u] == kNoVertex) {
        dist_[u] = 0;
        q.push_back(static_cast<Vertex>(u));
      }
    }
    bool found = false;
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop_front();
      for (Vertex v : p_.candidates[static_cast<std::size_t>(u)]) {
        if (!usable(v)) continue;
        Vertex w = match_right_[static_cast<std::size_t>(v)];
        if (w == kNoVertex) {
          found = true;
        } else if (dist_[static_cast<std::size_t>(w)] < 0) {
          dist_[static_cast<std::size_t>(w)] = dist_[static_cast<std::size_t>(u)] + 1;
          q.push_back(w);
        }
      }
    }
    return found;
  }

  bool dfs(Vertex u) {
    const auto uu = static_cast<std::size_t>(u);
    const auto& cand = p_.candidates[uu];
    for (std::size_t& i = it_[uu]; i < cand.size(); ++i) {
      Vertex v = cand[i];
      if (!usable(v)) continue;
      Vertex w = match_right_[static_cast<std::size_t>(v)];
      if (w == kNoVertex ||
          (dist_[static_cast<std::size_t>(w)] == dist_[uu] + 1 && dfs(w))) {
        match_left_[uu] = v;
        match_right_[static_cast<std::size_t>(v)] = u;
        ++i;
        return true;
      }
    }
    dist_[uu] = -1;
    return false;
  }

  const CandidateMap& p_;
  std::span<const char> allowed_;
  std::vector<Vertex> match_left_;
  std::vector<Vertex> match_right_;
  std::vector<int> dist_;
  std::vector<std::size_t> it_;
};

}  // namespace

std::size_t Injection::defined_count() const {
  return static_cast<std::size_t>(
      std::count_if(image.begin(), image.end(), [](Vertex v) { return v != kNoVertex; }));
}

std::size_t candidate_union_size(const CandidateMap& problem, std::span<const Vertex> s) {
  std::vector<char> hit(problem.right_size, 0);
  std::size_t count = 0;
  for (Vertex a : s)
    for (Vertex b : problem.candidates.at(static_cast<std::size_t>(a)))
      if (!hit[static_cast<std::size_t>(b)]) {
        hit[static_cast<std::size_t>(b)] = 1;
        ++count;
      }
  return count;
}

MatchOutcome constrained_injection(const CandidateMap& problem, std::span<const char> preferred) {
  for (const auto& c : problem.candidates)
    for (Vertex b : c)
      if (b < 0 || static_cast<std::size_t>(b) >= problem.right_size)
        throw Error(ErrorCode::kUnknownVertex, "candidate " + std::to_string(b) + " outside right set");
  if (!preferred.empty() && preferred.size() != problem.right_size)
    throw Error(ErrorCode::kInvalidArgument, "preference mask has the wrong size");

  HopcroftKarp hk(problem);
  if (!preferred.empty()) hk.run(preferred);
  hk.run({});

  const auto& ml = hk.match_left();
  const auto& mr = hk.match_right();
  if (std::find(ml.begin(), ml.end(), kNoVertex) == ml.end()) return Injection{ml};

  // Alternating reachability from unmatched left vertices.
  std::vector<char> seen_left(problem.left_size(), 0);
  std::vector<char> seen_right(problem.right_size, 0);
  std::deque<Vertex> q;
  for (std::size_t u = 0; u < ml.size(); ++u) {
    if (ml[u] == kNoVertex) {
      seen_left[u] = 1;
      q.push_back(static_cast<Vertex>(u));
    }
  }
  while (!q.empty()) {
    Vertex u = q.front();
    q.pop_front();
    for (Vertex v : problem.candidates[static_cast<std::size_t>(u)]) {
      if (seen_right[static_cast<std::size_t>(v)]) continue;
      seen_right[static_cast<std::size_t>(v)] = 1;
      Vertex w = mr[static_cast<std::size_t>(v)];
      if (w != kNoVertex && !seen_left[static_cast<std::size_t>(w)]) {
        seen_left[static_cast<std::size_t>(w)] = 1;
        q.push_back(w);
      }
    }
  }
  DeficiencyCert cert;
  for (std::size_t u = 0; u < seen_left.size(); ++u)
    if (seen_left[u]) cert.set.push_back(static_cast<Vertex>(u));
  cert.union_size = candidate_union_size(problem, cert.set);
  if (cert.set.size() <= cert.union_size)
    throw std::logic_error("deficiency extraction produced a set satisfying Hall's condition");
  return cert;
}

bool is_injective(const Injection& f, std::size_t codomain_size) {
  std::vector<char> hit(codomain_size, 0);
  for (Vertex y : f.image) {
    if (y == kNoVertex) continue;
    if (y < 0 || static_cast<std::size_t>(y) >= codomain_size) return false;
    if (hit[static_cast<std::size_t>(y)]) return false;
    hit[static_cast<std::size_t>(y)] = 1;
  }
  return true;
}

std::size_t Bijection::pair_count() const {
  return static_cast<std::size_t>(
      std::count_if(forward.begin(), forward.end(), [](Vertex v) { return v != kNoVertex; }));
}

Bijection sb_combine(const Injection& phi, const Injection& psi) {
  const std::size_t nx = phi.image.size();
  const std::size_t ny = psi.image.size();
  if (!is_injective(phi, ny)) throw Error(ErrorCode::kNotInjective, "first map is not injective into Y");
  if (!is_injective(psi, nx)) throw Error(ErrorCode::kNotInjective, "second map is not injective into X");

  std::vector<char> hit_x(nx, 0), hit_y(ny, 0);
  for (Vertex y : phi.image)
    if (y != kNoVertex) hit_y[static_cast<std::size_t>(y)] = 1;
  for (Vertex x : psi.image)
    if (x != kNoVertex) hit_x[static_cast<std::size_t>(x)] = 1;

  Bijection h;
  h.forward.assign(nx, kNoVertex);
  h.backward.assign(ny, kNoVertex);
  h.from_inverse.assign(nx, 0);
  std::vector<char> done_x(nx, 0), done_y(ny, 0);

  auto pair = [&](Vertex x, Vertex y, bool inverse) {
    h.forward[static_cast<std::size_t>(x)] = y;
    h.backward[static_cast<std::size_t>(y)] = x;
    h.from_inverse[static_cast<std::size_t>(x)] = inverse ? 1 : 0;
  };

  // Chains starting in X (x with no psi-preimage): follow phi.
  for (std::size_t sx = 0; sx < nx; ++sx) {
    if (hit_x[sx]) continue;
    Vertex x = static_cast<Vertex>(sx);
    while (x != kNoVertex && !done_x[static_cast<std::size_t>(x)]) {
      done_x[static_cast<std::size_t>(x)] = 1;
      Vertex y = phi.image[static_cast<std::size_t>(x)];
      if (y == kNoVertex) break;
      done_y[static_cast<std::size_t>(y)] = 1;
      pair(x, y, false);
      x = psi.image[static_cast<std::size_t>(y)];
    }
  }
  // Chains starting in Y (y with no phi-preimage): follow psi^-1.
  for (std::size_t sy = 0; sy < ny; ++sy) {
    if (hit_y[sy]) continue;
    Vertex y = static_cast<Vertex>(sy);
    while (y != kNoVertex && !done_y[static_cast<std::size_t>(y)]) {
      done_y[static_cast<std::size_t>(y)] = 1;
      Vertex x = psi.image[static_cast<std::size_t>(y)];
      if (x == kNoVertex) break;
      done_x[static_cast<std::size_t>(x)] = 1;
      pair(x, y, true);
      y = phi.image[static_cast<std::size_t>(x)];
    }
  }
  // Everything left lies on alternating cycles.
  for (std::size_t sx = 0; sx < nx; ++sx) {
    if (done_x[sx]) continue;
    Vertex x = static_cast<Vertex>(sx);
    while (!done_x[static_cast<std::size_t>(x)]) {
      done_x[static_cast<std::size_t>(x)] = 1;
      Vertex y = phi.image[static_cast<std::size_t>(x)];
      done_y[static_cast<std::size_t>(y)] = 1;
      pair(x, y, false);
      x = psi.image[static_cast<std::size_t>(y)];
    }
  }
  return h;
}

}  // namespace coarse
