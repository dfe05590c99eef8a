#pragma once

// Scalar types shared by every module: exact rationals (GMP), exact Gaussian
// rationals, and complex doubles, plus the small trait layer that lets the
// geometry and calculus templates run on either backend.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace gauduchon {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Parses "3", "-2/3" or a plain decimal such as "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1) rendering.
std::string to_string(const Rational& q);

/// Exact element of Q(i).
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(int re) : re_(re) {}  // NOLINT: implicit int lift is convenient in formulas
  GaussRational(Rational re) : re_(std::move(re)) {}  // NOLINT
  GaussRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static GaussRational i() { return {Rational(0), Rational(1)}; }

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o);
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {Rational(-a.re_), Rational(-a.im_)}; }

  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const GaussRational& z);

 private:
  Rational re_{0};
  Rational im_{0};
};

inline GaussRational conj(const GaussRational& z) { return {z.real(), Rational(-z.imag())}; }
inline Complex to_complex(const GaussRational& z) { return {z.real().get_d(), z.imag().get_d()}; }
std::string to_string(const GaussRational& z);

// ---------------------------------------------------------------------------
// Scalar traits. Every scalar used by the templates provides:
//   zero / one / imaginary unit, conj, magnitude (as double),
//   exact-zero test, and a lift of exact rationals.
// ---------------------------------------------------------------------------

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational conj(const Rational& q) { return q; }
  static double magnitude(const Rational& q) { return std::fabs(q.get_d()); }
  static bool is_zero(const Rational& q) { return sgn(q) == 0; }
  static Rational lift(const Rational& q) { return q; }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double conj(double x) { return x; }
  static double magnitude(double x) { return std::fabs(x); }
  static bool is_zero(double x) { return x == 0.0; }
  static double lift(const Rational& q) { return q.get_d(); }
};

template <>
struct ScalarTraits<GaussRational> {
  static constexpr bool exact = true;
  static GaussRational zero() { return {}; }
  static GaussRational one() { return GaussRational(1); }
  static GaussRational imag_unit() { return GaussRational::i(); }
  static GaussRational conj(const GaussRational& z) { return gauduchon::conj(z); }
  static double magnitude(const GaussRational& z) { return std::abs(to_complex(z)); }
  static bool is_zero(const GaussRational& z) { return z.is_zero(); }
  static GaussRational lift(const Rational& q) { return GaussRational(q); }
  static GaussRational lift(const Rational& re, const Rational& im) { return {re, im}; }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool exact = false;
  static Complex zero() { return {0.0, 0.0}; }
  static Complex one() { return {1.0, 0.0}; }
  static Complex imag_unit() { return {0.0, 1.0}; }
  static Complex conj(const Complex& z) { return std::conj(z); }
  static double magnitude(const Complex& z) { return std::abs(z); }
  static bool is_zero(const Complex& z) { return z == Complex{}; }
  static Complex lift(const Rational& q) { return {q.get_d(), 0.0}; }
  static Complex lift(const Rational& re, const Rational& im) { return {re.get_d(), im.get_d()}; }
};

template <class S>
S conj_of(const S& z) {
  return ScalarTraits<S>::conj(z);
}

template <class S>
double magnitude(const S& z) {
  return ScalarTraits<S>::magnitude(z);
}

template <class S>
bool exactly_zero(const S& z) {
  return ScalarTraits<S>::is_zero(z);
}

}  // namespace gauduchon
