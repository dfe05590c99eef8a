#pragma once

// Residual bookkeeping shared by the verification suites.

#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "gauduchon/numeric.hpp"
#include "gauduchon/polynomial.hpp"

namespace gauduchon {

struct CheckItem {
  std::string name;
  bool pass = true;
  double residual = 0.0;
  /// First failing index tuple and the offending difference, if any.
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool all_pass() const {
    for (const auto& i : items)
      if (!i.pass) return false;
    return true;
  }
  void append(const CheckReport& o) { items.insert(items.end(), o.items.begin(), o.items.end()); }
};

inline std::string describe(const GaussPoly& p) { return p.to_string('s'); }
inline std::string describe(const GaussRational& z) { return to_string(z); }
inline std::string describe(const Rational& q) { return to_string(q); }
inline std::string describe(const Complex& z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

/// Records lhs - rhs against the item: exact scalars must match exactly,
/// floating ones to `tol`.
template <class V>
void record(CheckItem& item, const V& lhs, const V& rhs, double tol, const std::string& where = {}) {
  const V diff = lhs - rhs;
  const double mag = magnitude(diff);
  if (mag > item.residual) item.residual = mag;
  bool ok;
  if constexpr (ScalarTraits<V>::exact) ok = exactly_zero(diff);
  else ok = mag <= tol;
  if (!ok) {
    if (item.pass) item.detail = (where.empty() ? "" : where + ": ") + "difference " + describe(diff);
    item.pass = false;
  }
}

}  // namespace gauduchon
