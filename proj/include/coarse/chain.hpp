#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "coarse/types.hpp"

namespace coarse {

// Uniformly finite 0-chain on a finite net: one coefficient per vertex.
// Coefficients are exact rationals; integer chains have denominator 1
// everywhere.
class Chain0 {
 public:
  Chain0() = default;
  explicit Chain0(std::size_t n) : coeff_(n, Rational(0)) {}
  explicit Chain0(std::vector<Rational> coeff) : coeff_(std::move(coeff)) {}
  static Chain0 from_integers(std::span<const std::int64_t> values);
  static Chain0 delta(std::size_t n, Vertex x, std::int64_t value = 1);

  std::size_t size() const { return coeff_.size(); }
  const Rational& operator[](Vertex x) const { return coeff_[static_cast<std::size_t>(x)]; }
  Rational& operator[](Vertex x) { return coeff_[static_cast<std::size_t>(x)]; }
  const std::vector<Rational>& coefficients() const { return coeff_; }

  bool is_integral() const;
  // M0 = max |coefficient|.
  Rational bound() const;
  Rational total() const;
  Rational sum_over(std::span<const Vertex> s) const;
  VertexSet support() const;
  // Least common multiple of all denominators.
  std::int64_t common_denominator() const;

  Chain0& operator+=(const Chain0& other);
  Chain0& operator-=(const Chain0& other);
  friend Chain0 operator+(Chain0 a, const Chain0& b) { return a += b; }
  friend Chain0 operator-(Chain0 a, const Chain0& b) { return a -= b; }
  friend Chain0 operator*(const Rational& k, Chain0 a) {
    for (auto& c : a.coeff_) c *= k;
    return a;
  }
  friend bool operator==(const Chain0&, const Chain0&) = default;

 private:
  std::vector<Rational> coeff_;
};

}  // namespace coarse
