#include "mpcsim/field.hpp"

#include <optional>

namespace mpcsim {

FieldElem FieldElem::pow(uint64_t e) const {
  FieldElem base = *this;
  FieldElem acc(1);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

FieldElem FieldElem::inv() const {
  if (v_ == 0) throw SpecError("inverse of zero");
  return pow(kPrime - 2);
}

Poly lagrange_interpolate(const PointVec& points) {
  if (points.empty()) throw SpecError("interpolation needs at least one point");
  size_t n = points.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (points[i].first == points[j].first)
        throw DuplicateAbscissa("repeated x-coordinate");

  // Accumulate sum_i y_i * prod_{j!=i} (x - x_j)/(x_i - x_j) coefficient-wise.
  std::vector<FieldElem> result(n, FieldElem(0));
  std::vector<FieldElem> basis;
  for (size_t i = 0; i < n; ++i) {
    basis.assign(1, FieldElem(1));
    FieldElem denom(1);
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      // basis *= (x - x_j)
      basis.push_back(FieldElem(0));
      for (size_t k = basis.size() - 1; k > 0; --k)
        basis[k] = basis[k - 1] - basis[k] * points[j].first;
      basis[0] = FieldElem(0) - basis[0] * points[j].first;
      denom *= points[i].first - points[j].first;
    }
    FieldElem scale = points[i].second * denom.inv();
    for (size_t k = 0; k < basis.size(); ++k) result[k] += basis[k] * scale;
  }
  return Poly(std::move(result));
}

FieldElem lagrange_at_zero(const PointVec& points) {
  if (points.empty()) throw SpecError("interpolation needs at least one point");
  FieldElem acc(0);
  for (size_t i = 0; i < points.size(); ++i) {
    FieldElem num(1), den(1);
    for (size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      if (points[i].first == points[j].first)
        throw DuplicateAbscissa("repeated x-coordinate");
      num *= points[j].first;
      den *= points[j].first - points[i].first;
    }
    acc += points[i].second * num * den.inv();
  }
  return acc;
}

namespace {

// Gaussian elimination; returns one solution of A x = b or nullopt when the
// system is inconsistent. Free variables are set to zero.
std::optional<std::vector<FieldElem>> solve_linear(
    std::vector<std::vector<FieldElem>> a, std::vector<FieldElem> b) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t prow = r;
    while (prow < rows && a[prow][c] == FieldElem(0)) ++prow;
    if (prow == rows) continue;
    std::swap(a[prow], a[r]);
    std::swap(b[prow], b[r]);
    FieldElem piv = a[r][c].inv();
    for (size_t k = c; k < cols; ++k) a[r][k] *= piv;
    b[r] *= piv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == FieldElem(0)) continue;
      FieldElem f = a[i][c];
      for (size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (b[i] != FieldElem(0)) return std::nullopt;
  std::vector<FieldElem> x(cols, FieldElem(0));
  for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i];
  return x;
}

// Polynomial long division; returns quotient iff remainder is zero.
std::optional<Poly> divide_exact(const Poly& num, const Poly& den) {
  if (den.is_zero()) return std::nullopt;
  std::vector<FieldElem> rem = num.coeffs;
  int dn = num.degree(), dd = den.degree();
  if (dn < dd) return num.is_zero() ? std::optional<Poly>(Poly{}) : std::nullopt;
  std::vector<FieldElem> q(dn - dd + 1, FieldElem(0));
  FieldElem lead_inv = den.coeffs.back().inv();
  for (int k = dn - dd; k >= 0; --k) {
    FieldElem f = rem[k + dd] * lead_inv;
    q[k] = f;
    for (int j = 0; j <= dd; ++j) rem[k + j] -= f * den.coeffs[j];
  }
  for (auto& c : rem)
    if (c != FieldElem(0)) return std::nullopt;
  return Poly(std::move(q));
}

}  // namespace

Poly bw_decode(const PointVec& points, size_t degree_bound, size_t max_errors) {
  size_t n = points.size();
  if (degree_bound == 0) throw SpecError("degree bound must be positive");
  if (n < degree_bound + 2 * max_errors)
    throw SpecError("too few points for the requested error budget");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (points[i].first == points[j].first)
        throw DuplicateAbscissa("repeated x-coordinate");

  auto check = [&](const Poly& f) {
    if (f.degree() >= static_cast<int>(degree_bound)) return false;
    size_t mismatches = 0;
    for (const auto& [x, y] : points)
      if (f.eval(x) != y) ++mismatches;
    return mismatches <= max_errors;
  };

  // Unknowns: Q of degree < degree_bound + e, and the non-leading
  // coefficients of a monic error locator E of degree e, constrained by
  // Q(x_i) = y_i * E(x_i). Rank-deficient instances (fewer than e actual
  // errors) are handled by retrying with a smaller locator degree.
  for (size_t e = max_errors + 1; e-- > 0;) {
    size_t q_terms = degree_bound + e;
    std::vector<std::vector<FieldElem>> a(n,
        std::vector<FieldElem>(q_terms + e, FieldElem(0)));
    std::vector<FieldElem> b(n);
    for (size_t i = 0; i < n; ++i) {
      FieldElem x = points[i].first, y = points[i].second;
      FieldElem xp(1);
      for (size_t k = 0; k < q_terms; ++k) {
        a[i][k] = xp;
        xp *= x;
      }
      xp = FieldElem(1);
      for (size_t k = 0; k < e; ++k) {
        a[i][q_terms + k] = FieldElem(0) - y * xp;
        xp *= x;
      }
      b[i] = y * x.pow(e);
    }
    auto sol = solve_linear(std::move(a), std::move(b));
    if (!sol) continue;
    Poly q(std::vector<FieldElem>(sol->begin(), sol->begin() + q_terms));
    std::vector<FieldElem> ecoeffs(sol->begin() + q_terms, sol->end());
    ecoeffs.push_back(FieldElem(1));  // monic
    Poly locator(std::move(ecoeffs));
    auto f = divide_exact(q, locator);
    if (f && check(*f)) return *f;
  }
  throw DecodingFailure("no codeword within the error budget");
}

}  // namespace mpcsim
