#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mpcsim/errors.hpp"
#include "mpcsim/rng.hpp"

namespace mpcsim {

// Element of GF(p) for the Mersenne prime p = 2^61 - 1. Products fit in
// 128-bit intermediates and reduce with two shifts.
class FieldElem {
 public:
  static constexpr uint64_t kPrime = (uint64_t(1) << 61) - 1;

  constexpr FieldElem() = default;
  constexpr explicit FieldElem(uint64_t v) : v_(v % kPrime) {}

  constexpr uint64_t value() const { return v_; }

  friend FieldElem operator+(FieldElem a, FieldElem b) {
    uint64_t s = a.v_ + b.v_;
    if (s >= kPrime) s -= kPrime;
    return from_raw(s);
  }
  friend FieldElem operator-(FieldElem a, FieldElem b) {
    uint64_t s = a.v_ + kPrime - b.v_;
    if (s >= kPrime) s -= kPrime;
    return from_raw(s);
  }
  friend FieldElem operator*(FieldElem a, FieldElem b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a.v_) * b.v_;
    uint64_t lo = static_cast<uint64_t>(p & kPrime);
    uint64_t hi = static_cast<uint64_t>(p >> 61);
    uint64_t s = lo + hi;
    if (s >= kPrime) s -= kPrime;
    return from_raw(s);
  }
  FieldElem& operator+=(FieldElem o) { return *this = *this + o; }
  FieldElem& operator-=(FieldElem o) { return *this = *this - o; }
  FieldElem& operator*=(FieldElem o) { return *this = *this * o; }

  FieldElem pow(uint64_t e) const;
  FieldElem inv() const;  // throws SpecError on zero

  friend bool operator==(FieldElem a, FieldElem b) { return a.v_ == b.v_; }
  friend bool operator!=(FieldElem a, FieldElem b) { return a.v_ != b.v_; }

  static FieldElem random(RngStream& rng) {
    return FieldElem(rng.next_below(kPrime));
  }

 private:
  static constexpr FieldElem from_raw(uint64_t v) {
    FieldElem e;
    e.v_ = v;
    return e;
  }
  uint64_t v_ = 0;
};

// Dense polynomial, lowest coefficient first. The zero polynomial is the
// empty vector; otherwise the leading coefficient is nonzero.
struct Poly {
  std::vector<FieldElem> coeffs;

  Poly() = default;
  explicit Poly(std::vector<FieldElem> c) : coeffs(std::move(c)) { trim(); }

  bool is_zero() const { return coeffs.empty(); }
  // degree() of the zero polynomial is -1 by convention.
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  FieldElem eval(FieldElem x) const {
    FieldElem acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      acc = acc * x + *it;
    return acc;
  }

  void trim() {
    while (!coeffs.empty() && coeffs.back() == FieldElem(0)) coeffs.pop_back();
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.coeffs == b.coeffs;
  }
};

using PointVec = std::vector<std::pair<FieldElem, FieldElem>>;

// Unique polynomial of degree < points.size() through all points.
Poly lagrange_interpolate(const PointVec& points);

// Evaluate only the constant term of the interpolating polynomial at x=0;
// cheaper than full interpolation when only the secret is needed.
FieldElem lagrange_at_zero(const PointVec& points);

// Berlekamp-Welch unique decoding. If at most max_errors of the y-values
// deviate from some polynomial f with deg f < degree_bound (and
// points.size() >= degree_bound + 2*max_errors), returns f. Otherwise throws
// DecodingFailure; never silently returns a wrong polynomial.
Poly bw_decode(const PointVec& points, size_t degree_bound, size_t max_errors);

}  // namespace mpcsim
