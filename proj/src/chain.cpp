#include "coarse/chain.hpp"

#include <numeric>

namespace coarse {

Chain0 Chain0::from_integers(std::span<const std::int64_t> values) {
  std::vector<Rational> c;
  c.reserve(values.size());
  for (auto v : values) c.emplace_back(v);
  return Chain0(std::move(c));
}

Chain0 Chain0::delta(std::size_t n, Vertex x, std::int64_t value) {
  Chain0 c(n);
  c[x] = Rational(value);
  return c;
}

bool Chain0::is_integral() const {
  for (const auto& c : coeff_)
    if (c.denominator() != 1) return false;
  return true;
}

Rational Chain0::bound() const {
  Rational m(0);
  for (const auto& c : coeff_) m = std::max(m, c < 0 ? -c : c);
  return m;
}

Rational Chain0::total() const {
  Rational t(0);
  for (const auto& c : coeff_) t += c;
  return t;
}

Rational Chain0::sum_over(std::span<const Vertex> s) const {
  Rational t(0);
  for (Vertex x : s) t += (*this)[x];
  return t;
}

VertexSet Chain0::support() const {
  VertexSet out;
  for (std::size_t i = 0; i < coeff_.size(); ++i)
    if (coeff_[i].numerator() != 0) out.push_back(static_cast<Vertex>(i));
  return out;
}

std::int64_t Chain0::common_denominator() const {
  std::int64_t l = 1;
  for (const auto& c : coeff_) {
    std::int64_t d = c.denominator();
    std::int64_t g = std::gcd(l, d);
    if (l / g > std::numeric_limits<std::int64_t>::max() / d)
      throw Error(ErrorCode::kOverflow, "common denominator overflows 64 bits");
    l = l / g * d;
  }
  return l;
}

Chain0& Chain0::operator+=(const Chain0& other) {
  if (other.size() != size()) throw Error(ErrorCode::kDomainMismatch, "chains on different nets");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] += other.coeff_[i];
  return *this;
}

Chain0& Chain0::operator-=(const Chain0& other) {
  if (other.size() != size()) throw Error(ErrorCode::kDomainMismatch, "chains on different nets");
  for (std::size_t i = 0; i < coeff_.size(); ++i) coeff_[i] -= other.coeff_[i];
  return *this;
}

}  // namespace coarse
