#pragma once

// Dense univariate polynomials in the Gauduchon parameter s with exact
// coefficients. RationalPoly carries the coefficient functions a, b, c and the
// linear system; GaussPoly is the scalar ring of the symbolic-s formal calculus.

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "gauduchon/numeric.hpp"

namespace gauduchon {

namespace detail {
inline bool coeff_is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool coeff_is_zero(const GaussRational& z) { return z.is_zero(); }

template <class V>
V lift_coeff(const Rational& q) {
  if constexpr (std::is_same_v<V, double>) return q.get_d();
  else if constexpr (std::is_same_v<V, Complex>) return Complex(q.get_d(), 0.0);
  else return V(q);
}
template <class V>
V lift_coeff(const GaussRational& z) {
  if constexpr (std::is_same_v<V, Complex>) return to_complex(z);
  else return V(z);
}
}  // namespace detail

template <class C>
class Poly {
 public:
  using Coeff = C;

  Poly() = default;
  Poly(int constant) : Poly(C(constant)) {}  // NOLINT
  Poly(C constant) {                          // NOLINT
    if (!detail::coeff_is_zero(constant)) coeffs_.push_back(std::move(constant));
  }
  Poly(std::initializer_list<C> ascending) : coeffs_(ascending) { trim(); }
  explicit Poly(std::vector<C> ascending) : coeffs_(std::move(ascending)) { trim(); }

  /// The monomial s^k.
  static Poly monomial(int k, C coeff = C(1)) {
    std::vector<C> c(static_cast<std::size_t>(k) + 1);
    c.back() = std::move(coeff);
    return Poly(std::move(c));
  }
  static Poly s() { return monomial(1); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<C>& coefficients() const { return coeffs_; }
  C coeff(int k) const {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[static_cast<std::size_t>(k)] : C(0);
  }
  C leading() const { return coeffs_.empty() ? C(0) : coeffs_.back(); }

  template <class V>
  V evaluate(const V& x) const {
    V acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      acc *= x;
      acc += detail::lift_coeff<V>(*it);
    }
    return acc;
  }

  Poly& operator+=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
  }
  Poly& operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
  }
  Poly& operator*=(const C& k) {
    if (detail::coeff_is_zero(k)) {
      coeffs_.clear();
      return *this;
    }
    for (auto& c : coeffs_) c *= k;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<C> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (detail::coeff_is_zero(a.coeffs_[i])) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Poly(std::move(out));
  }
  friend Poly operator*(Poly a, const C& k) { return a *= k; }
  friend Poly operator*(const C& k, Poly a) { return a *= k; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Quotient and remainder; requires a field of coefficients.
  std::pair<Poly, Poly> divmod(const Poly& divisor) const {
    if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly rem = *this;
    if (rem.degree() < divisor.degree()) return {Poly{}, rem};
    std::vector<C> quot(static_cast<std::size_t>(rem.degree() - divisor.degree() + 1));
    const C lead = divisor.leading();
    while (!rem.is_zero() && rem.degree() >= divisor.degree()) {
      const int shift = rem.degree() - divisor.degree();
      const C factor = rem.leading() / lead;
      quot[static_cast<std::size_t>(shift)] = factor;
      for (int k = 0; k <= divisor.degree(); ++k)
        rem.coeffs_[static_cast<std::size_t>(k + shift)] -= factor * divisor.coeffs_[static_cast<std::size_t>(k)];
      rem.coeffs_.pop_back();  // leading term cancels exactly
      rem.trim();
    }
    return {Poly(std::move(quot)), rem};
  }

  /// Division that must be exact; throws otherwise.
  Poly exact_div(const Poly& divisor) const {
    auto [q, r] = divmod(divisor);
    if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
    return q;
  }

  std::string to_string(char var = 's') const;

 private:
  void trim() {
    while (!coeffs_.empty() && detail::coeff_is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  std::vector<C> coeffs_;
};

using RationalPoly = Poly<Rational>;
using GaussPoly = Poly<GaussRational>;

GaussPoly to_gauss(const RationalPoly& p);
GaussPoly conj(const GaussPoly& p);

template <class C>
std::string Poly<C>::to_string(char var) const {
  using gauduchon::to_string;
  if (is_zero()) return "0";
  std::string out;
  for (int k = degree(); k >= 0; --k) {
    const C& c = coeffs_[static_cast<std::size_t>(k)];
    if (detail::coeff_is_zero(c)) continue;
    std::string cs = to_string(c);
    const bool compound = cs.find_first_of("+-", 1) != std::string::npos;
    if (compound) cs = "(" + cs + ")";
    if (!out.empty()) {
      if (cs[0] == '-') {
        out += " - ";
        cs.erase(0, 1);
      } else {
        out += " + ";
      }
    }
    if (k == 0) {
      out += cs;
    } else {
      if (cs == "1") cs.clear();
      else if (cs == "-1") cs = "-";
      else cs += "*";
      out += cs + var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

template <>
struct ScalarTraits<RationalPoly> {
  static constexpr bool exact = true;
  static RationalPoly zero() { return {}; }
  static RationalPoly one() { return RationalPoly(1); }
  static RationalPoly conj(const RationalPoly& p) { return p; }
  static double magnitude(const RationalPoly& p) {
    double m = 0.0;
    for (const auto& c : p.coefficients()) m = std::max(m, std::fabs(c.get_d()));
    return m;
  }
  static bool is_zero(const RationalPoly& p) { return p.is_zero(); }
  static RationalPoly lift(const Rational& q) { return RationalPoly(q); }
};

template <>
struct ScalarTraits<GaussPoly> {
  static constexpr bool exact = true;
  static GaussPoly zero() { return {}; }
  static GaussPoly one() { return GaussPoly(1); }
  static GaussPoly imag_unit() { return GaussPoly(GaussRational::i()); }
  static GaussPoly conj(const GaussPoly& p) { return gauduchon::conj(p); }
  /// Largest coefficient modulus; only used for diagnostics.
  static double magnitude(const GaussPoly& p) {
    double m = 0.0;
    for (const auto& c : p.coefficients()) m = std::max(m, std::abs(to_complex(c)));
    return m;
  }
  static bool is_zero(const GaussPoly& p) { return p.is_zero(); }
  static GaussPoly lift(const Rational& q) { return GaussPoly(GaussRational(q)); }
  static GaussPoly lift(const Rational& re, const Rational& im) { return GaussPoly(GaussRational(re, im)); }
};

}  // namespace gauduchon
