#include "gauduchon/polynomials.hpp"

#include <algorithm>
#include <stdexcept>

namespace gauduchon {

namespace {

RationalPoly ints(std::initializer_list<long> ascending) {
  std::vector<Rational> c;
  for (long v : ascending) c.emplace_back(v);
  return RationalPoly(std::move(c));
}

const RationalPoly S = RationalPoly::s();

// Expanded entries, frozen from an independent symbolic expansion.
struct Frozen {
  const char* name;
  int row, col;  // 1-based
  RationalPoly poly;
};

std::vector<Frozen> frozen_entries() {
  return {
      {"row1 B: c(s-2)", 1, 2, ints({-8, 28, -28, 8})},
      {"row1 C: b-a", 1, 3, ints({0, 0, 2, -1})},
      {"row1 grad: c", 1, 4, ints({4, -12, 8})},
      {"x1", 2, 1, ints({0, 0, 0, -8, 24, -18})},
      {"x2", 2, 2, ints({0, -32, 192, -440, 484, -258, 54})},
      {"x3", 2, 3, ints({0, 0, 0, 0, 0, -2, 3})},
      {"row2 grad: -c(b-s^3)", 2, 4, ints({0, 16, -88, 176, -152, 48})},
      {"y1", 3, 1, ints({0, 0, 16, -96, 204, -184, 60})},
      {"y2", 3, 2, ints({0, -32, 208, -512, 584, -296, 50})},
      {"y3", 3, 3, ints({0, 0, -32, 160, -280, 202, -53})},
      {"row3 grad: -c(b-s^3)", 3, 4, ints({0, 16, -88, 176, -152, 48})},
      {"z1", 4, 1, ints({0, 0, 0, -16, 52, -50, 12})},
      {"z2", 4, 2, ints({0, 0, 0, 0, 0, -2, 2})},
      {"z3", 4, 3, ints({0, 0, 0, 0, 0, 0, 1})},
  };
}

Rational eval(const RationalPoly& p, const Rational& x) { return p.evaluate(x); }

}  // namespace

Abc abc() {
  const RationalPoly one(1);
  const RationalPoly a = ints({0, -4}) * (S - one) * (S - one);
  const RationalPoly b = -(S * ints({4, -10, 5}));
  const RationalPoly c = ints({4}) * (S - one) * ints({-1, 2});
  return {a, b, c};
}

RationalPoly s_power(int k) { return RationalPoly::monomial(k, Rational(1)); }

Claims standard_claims() {
  const Abc t = abc();
  return {t.a, t.b, t.c, std::nullopt};
}

Claims tampered_claims(char kind) {
  Claims c = standard_claims();
  switch (kind) {
    case 'a': c.a = -c.a; break;
    case 'b': c.b = -c.b; break;
    case 'c': c.c = -c.c; break;
    default: throw std::invalid_argument(std::string("unknown coefficient to tamper: ") + kind);
  }
  return c;
}

Claims tampered_entry(int row, int col) {
  if (row < 1 || row > 4 || col < 1 || col > 4) throw std::invalid_argument("matrix entry out of range");
  Claims c = standard_claims();
  c.flipped_entry = std::make_pair(row, col);
  return c;
}

RowCoefficients row_coefficients(const Claims& claims) {
  const RationalPoly& a = claims.a;
  const RationalPoly& b = claims.b;
  const RationalPoly& c = claims.c;
  const RationalPoly s3 = s_power(3);
  const RationalPoly s6 = s_power(6);
  const RationalPoly one(1);
  const RationalPoly two(2);
  RowCoefficients r;
  r.x[0] = -((a - b + two * s3) * (a + b + c * S + s3));
  r.x[1] = two * b * c * (one - S) - (a - b) * s3 - b * b;
  r.x[2] = b * (a - b + s3) + s3 * (a + s3 - two * c * (one - S));
  r.y[0] = -((a - b + two * s3) * (a - two * c * (S - one)));
  r.y[1] = s3 * (two * b - a - c * S) + c * c * S * (S - two);
  r.y[2] = a * c * S - b * b - b * s3 - s6;
  r.z[0] = -((a + s3) * (a + s3 + c * S)) - s3 * (a - b + two * s3);
  r.z[1] = s3 * (a - b + s3);
  r.z[2] = s6;
  return r;
}

PolyMatrix system_matrix(const Claims& claims) {
  const RationalPoly& a = claims.a;
  const RationalPoly& b = claims.b;
  const RationalPoly& c = claims.c;
  const RationalPoly grad = -(c * (b - s_power(3)));
  const RowCoefficients r = row_coefficients(claims);
  PolyMatrix m(4, 4);
  m(0, 0) = RationalPoly();
  m(0, 1) = c * (S - RationalPoly(2));
  m(0, 2) = b - a;
  m(0, 3) = c;
  for (int k = 0; k < 3; ++k) {
    m(1, k) = r.x[static_cast<std::size_t>(k)];
    m(2, k) = r.y[static_cast<std::size_t>(k)];
    m(3, k) = r.z[static_cast<std::size_t>(k)];
  }
  m(1, 3) = grad;
  m(2, 3) = grad;
  m(3, 3) = RationalPoly();
  if (claims.flipped_entry) {
    auto [row, col] = *claims.flipped_entry;
    m(row - 1, col - 1) = -m(row - 1, col - 1);
  }
  return m;
}

std::vector<PolyCheck> coefficient_identities(const Claims& claims) {
  std::vector<PolyCheck> out;
  const RationalPoly two(2);
  const RationalPoly lhs = two * (claims.a - claims.b - claims.c * (S - two));
  const RationalPoly rhs = -(two * (S - two) * ints({4, -12, 7}));
  out.push_back({"2(a-b-c(s-2)) = -2(s-2)(7s^2-12s+4)", lhs == rhs, lhs - rhs});

  const PolyMatrix m = system_matrix(claims);
  for (const auto& f : frozen_entries()) {
    const RationalPoly diff = m(f.row - 1, f.col - 1) - f.poly;
    out.push_back({f.name, diff.is_zero(), diff});
  }
  for (auto [row, col] : {std::pair{1, 1}, std::pair{4, 4}}) {
    const RationalPoly& e = m(row - 1, col - 1);
    out.push_back({"entry (" + std::to_string(row) + "," + std::to_string(col) + ") = 0", e.is_zero(), e});
  }
  return out;
}

RationalPoly determinant_cofactor(const PolyMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const int n = m.rows();
  if (n == 0) return RationalPoly(1);
  if (n == 1) return m(0, 0);
  RationalPoly det;
  for (int col = 0; col < n; ++col) {
    if (m(0, col).is_zero()) continue;
    PolyMatrix minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r)
      for (int c = 0, mc = 0; c < n; ++c)
        if (c != col) minor(r - 1, mc++) = m(r, c);
    RationalPoly term = m(0, col) * determinant_cofactor(minor);
    if (col % 2 == 0) det += term;
    else det -= term;
  }
  return det;
}

RationalPoly determinant_bareiss(PolyMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  const int n = m.rows();
  RationalPoly prev(1);
  bool negate = false;
  for (int k = 0; k < n - 1; ++k) {
    if (m(k, k).is_zero()) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (!m(r, k).is_zero()) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return RationalPoly();
      for (int c = 0; c < n; ++c) std::swap(m(k, c), m(swap_row, c));
      negate = !negate;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)).exact_div(prev);
      m(i, k) = RationalPoly();
    }
    prev = m(k, k);
  }
  return negate ? -m(n - 1, n - 1) : m(n - 1, n - 1);
}

RationalPoly determinant(const Claims& claims) {
  const PolyMatrix m = system_matrix(claims);
  RationalPoly cof = determinant_cofactor(m);
  if (cof != determinant_bareiss(m)) throw std::logic_error("cofactor and fraction-free determinants disagree");
  return cof;
}

RationalPoly factored_determinant() {
  const RationalPoly one(1);
  auto pw = [](const RationalPoly& p, int k) {
    RationalPoly out(1);
    for (int i = 0; i < k; ++i) out *= p;
    return out;
  };
  return RationalPoly(64) * s_power(8) * pw(S - RationalPoly(2), 3) * pw(S - one, 3) * pw(ints({-1, 2}), 3) *
         pw(ints({-2, 3}), 2) * ints({-4, 5});
}

namespace {

std::vector<mpz_class> divisors(mpz_class v) {
  v = abs(v);
  std::vector<mpz_class> out;
  if (v == 0) return out;
  for (mpz_class d = 1; d * d <= v; ++d)
    if (v % d == 0) {
      out.push_back(d);
      if (d * d != v) out.push_back(v / d);
    }
  return out;
}

}  // namespace

std::vector<Root> rational_roots(const RationalPoly& poly) {
  if (poly.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
  std::vector<Root> roots;
  RationalPoly p = poly;
  int zero_mult = 0;
  while (p.degree() > 0 && sgn(p.coeff(0)) == 0) {
    p = p.exact_div(S);
    ++zero_mult;
  }
  if (zero_mult > 0) roots.push_back({Rational(0), zero_mult});

  // Integer-coefficient multiple for the candidate test.
  mpz_class lcm = 1;
  for (const auto& q : p.coefficients()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
  const mpz_class lead = mpz_class(p.leading() * lcm);
  const mpz_class trail = mpz_class(p.coeff(0) * lcm);

  std::vector<Rational> candidates;
  for (const auto& num : divisors(trail))
    for (const auto& den : divisors(lead))
      for (int sign : {1, -1}) {
        Rational r(mpz_class(num * sign), den);
        r.canonicalize();
        if (std::find(candidates.begin(), candidates.end(), r) == candidates.end()) candidates.push_back(r);
      }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& r : candidates) {
    int mult = 0;
    const RationalPoly lin{Rational(-r), Rational(1)};
    while (p.degree() > 0 && sgn(eval(p, r)) == 0) {
      p = p.exact_div(lin);
      ++mult;
    }
    if (mult > 0) roots.push_back({r, mult});
  }
  if (p.degree() > 0) throw std::runtime_error("factor without rational roots left over: " + p.to_string());
  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.value < y.value; });
  return roots;
}

std::vector<Root> singular_set(const Claims& claims) { return rational_roots(determinant(claims)); }

Matrix<Rational> evaluate(const PolyMatrix& m, const Rational& s0) {
  Matrix<Rational> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = eval(m(i, j), s0);
  return out;
}

ReducedRank reduced_rank(const Rational& s0, const Claims& claims) {
  const Matrix<Rational> full = evaluate(system_matrix(claims), s0);
  Matrix<Rational> sub(4, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) sub(i, j) = full(i, j);
  ReducedRank out;
  out.rank = rank(sub);
  for (int i = 0; i < 4; ++i) {
    mpz_class lcm = 1;
    for (int j = 0; j < 3; ++j) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), sub(i, j).get_den_mpz_t());
    std::array<mpz_class, 3> row;
    mpz_class g = 0;
    for (int j = 0; j < 3; ++j) {
      row[static_cast<std::size_t>(j)] = mpz_class(sub(i, j) * lcm);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), row[static_cast<std::size_t>(j)].get_mpz_t());
    }
    if (g != 0) {
      int lead_sign = 0;
      for (const auto& v : row)
        if (sgn(v) != 0) {
          lead_sign = sgn(v);
          break;
        }
      for (auto& v : row) v = v / g * lead_sign;
    }
    out.rows.push_back(row);
  }
  return out;
}

bool conclude_C_zero(const Rational& s0, const Claims& claims) {
  return sgn(eval(determinant(claims), s0)) != 0;
}

}  // namespace gauduchon
