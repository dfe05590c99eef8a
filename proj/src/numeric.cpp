#include "gauduchon/numeric.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace gauduchon {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  const auto dot = s.find('.');
  const auto exp = s.find_first_of("eE");
  if (dot != std::string::npos || exp != std::string::npos) {
    // Decimal literal: read it as an exact terminating decimal.
    std::string mantissa = s.substr(0, exp);
    long exponent = 0;
    if (exp != std::string::npos) exponent = std::stol(s.substr(exp + 1));
    bool negative = false;
    if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
      negative = mantissa[0] == '-';
      mantissa.erase(0, 1);
    }
    std::string digits;
    long frac_digits = 0;
    bool after_dot = false;
    for (char ch : mantissa) {
      if (ch == '.') {
        if (after_dot) throw std::invalid_argument("malformed decimal: " + s);
        after_dot = true;
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        digits.push_back(ch);
        if (after_dot) ++frac_digits;
      } else {
        throw std::invalid_argument("malformed decimal: " + s);
      }
    }
    if (digits.empty()) throw std::invalid_argument("malformed decimal: " + s);
    mpz_class num(digits, 10);
    if (negative) num = -num;
    const long shift = exponent - frac_digits;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational q = shift < 0 ? Rational(num, scale) : Rational(num * scale);
    q.canonicalize();
    return q;
  }

  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  const Rational norm = o.re_ * o.re_ + o.im_ * o.im_;
  if (sgn(norm) == 0) throw std::domain_error("division by zero Gaussian rational");
  Rational re = (re_ * o.re_ + im_ * o.im_) / norm;
  Rational im = (im_ * o.re_ - re_ * o.im_) / norm;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string to_string(const GaussRational& z) {
  if (sgn(z.imag()) == 0) return to_string(z.real());
  if (sgn(z.real()) == 0) return to_string(z.imag()) + "i";
  std::string im = to_string(z.imag());
  if (im[0] != '-') im = "+" + im;
  return to_string(z.real()) + im + "i";
}

std::ostream& operator<<(std::ostream& os, const GaussRational& z) { return os << to_string(z); }

}  // namespace gauduchon
