#pragma once

// Torsion components as free values, differentiated only through the
// substitution rules for T_{,l} and c T_{,lbar}. Products are differentiated
// with first-order jets, so a rule evaluated on jets yields second
// derivatives. All barred-direction derivatives carry a factor c(s), so with
// s a polynomial variable everything stays polynomial.
//
// Scalar backends: GaussPoly (symbolic s), GaussRational (rational s) and
// Complex (cross-checks against genuine connections).
//
// Direction index convention: 0..n-1 are e_l, n..2n-1 are ebar_l.

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "gauduchon/checks.hpp"
#include "gauduchon/numeric.hpp"
#include "gauduchon/polynomial.hpp"
#include "gauduchon/polynomials.hpp"

namespace gauduchon {

// ---------------------------------------------------------------------------
// Jets

/// value plus derivatives in the 2n frame directions; an empty grad means all
/// derivatives vanish.
template <class V>
struct Jet {
  V value = ScalarTraits<V>::zero();
  std::vector<V> grad;

  Jet() = default;
  Jet(V v) : value(std::move(v)) {}  // NOLINT
  Jet(V v, std::vector<V> g) : value(std::move(v)), grad(std::move(g)) {}

  const V& d(std::size_t dir) const {
    static const V zero = ScalarTraits<V>::zero();
    return grad.empty() ? zero : grad[dir];
  }

  Jet& operator+=(const Jet& o) {
    value += o.value;
    if (!o.grad.empty()) {
      if (grad.empty()) grad.assign(o.grad.size(), ScalarTraits<V>::zero());
      for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += o.grad[k];
    }
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    value -= o.value;
    if (!o.grad.empty()) {
      if (grad.empty()) grad.assign(o.grad.size(), ScalarTraits<V>::zero());
      for (std::size_t k = 0; k < grad.size(); ++k) grad[k] -= o.grad[k];
    }
    return *this;
  }
  Jet& operator*=(const V& k) {
    value *= k;
    for (auto& g : grad) g *= k;
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    a.value = -a.value;
    for (auto& g : a.grad) g = -g;
    return a;
  }
  friend Jet operator*(Jet a, const V& k) { return a *= k; }
  friend Jet operator*(const V& k, Jet a) { return a *= k; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out(a.value * b.value);
    const std::size_t m = std::max(a.grad.size(), b.grad.size());
    if (m == 0) return out;
    out.grad.assign(m, ScalarTraits<V>::zero());
    if (!a.grad.empty())
      for (std::size_t k = 0; k < m; ++k) out.grad[k] += a.grad[k] * b.value;
    if (!b.grad.empty())
      for (std::size_t k = 0; k < m; ++k) out.grad[k] += a.value * b.grad[k];
    return out;
  }
  friend bool operator==(const Jet& a, const Jet& b) {
    if (!(a.value == b.value)) return false;
    const std::size_t m = std::max(a.grad.size(), b.grad.size());
    for (std::size_t k = 0; k < m; ++k)
      if (!(a.d(k) == b.d(k))) return false;
    return true;
  }
};

/// Conjugation swaps the e_l and ebar_l derivative halves.
template <class V>
Jet<V> conj_jet(const Jet<V>& j) {
  Jet<V> out(conj_of(j.value));
  if (j.grad.empty()) return out;
  const std::size_t n = j.grad.size() / 2;
  out.grad.resize(j.grad.size());
  for (std::size_t l = 0; l < n; ++l) {
    out.grad[l] = conj_of(j.grad[n + l]);
    out.grad[n + l] = conj_of(j.grad[l]);
  }
  return out;
}

template <class V>
struct ScalarTraits<Jet<V>> {
  static constexpr bool exact = ScalarTraits<V>::exact;
  static Jet<V> zero() { return {}; }
  static Jet<V> one() { return Jet<V>(ScalarTraits<V>::one()); }
  static Jet<V> conj(const Jet<V>& j) { return conj_jet(j); }
  static double magnitude(const Jet<V>& j) {
    double m = ScalarTraits<V>::magnitude(j.value);
    for (const auto& g : j.grad) m = std::max(m, ScalarTraits<V>::magnitude(g));
    return m;
  }
  static bool is_zero(const Jet<V>& j) {
    if (!ScalarTraits<V>::is_zero(j.value)) return false;
    for (const auto& g : j.grad)
      if (!ScalarTraits<V>::is_zero(g)) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Lifts and coefficient values

template <class V>
V lift_gauss(const GaussRational& z) {
  if constexpr (std::is_same_v<V, Complex>) return to_complex(z);
  else return V(z);
}

/// Claimed a, b, c and s^3 evaluated at the parameter value.
template <class V>
struct PointCoefficients {
  V s, a, b, c, s3;
};

template <class V>
PointCoefficients<V> point_coefficients(const Claims& claims, const V& s) {
  return {s, claims.a.evaluate(s), claims.b.evaluate(s), claims.c.evaluate(s), s * s * s};
}

template <class V>
V eval_poly(const RationalPoly& p, const V& s) {
  return p.evaluate(s);
}

inline std::size_t idx3(int n, int k, int i, int j) {
  return static_cast<std::size_t>((k * n + i) * n + j);
}

// ---------------------------------------------------------------------------
// Formal points

template <class V>
struct FormalPoint {
  int n = 0;
  V s = ScalarTraits<V>::zero();
  /// T^k_ij at idx3(n, k, i, j).
  std::vector<V> t;

  const V& T(int k, int i, int j) const { return t[idx3(n, k, i, j)]; }
  std::vector<V> eta() const {
    std::vector<V> e(static_cast<std::size_t>(n), ScalarTraits<V>::zero());
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) e[static_cast<std::size_t>(j)] += T(k, k, j);
    return e;
  }
};

/// T^k_ij = a_i delta^k_j - a_j delta^k_i.
template <class V>
FormalPoint<V> lck_torsion(const std::vector<GaussRational>& a, const V& s) {
  const int n = static_cast<int>(a.size());
  if (n < 2) throw std::invalid_argument("lck_torsion needs n >= 2");
  FormalPoint<V> p;
  p.n = n;
  p.s = s;
  p.t.assign(static_cast<std::size_t>(n * n * n), ScalarTraits<V>::zero());
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        GaussRational v;
        if (k == j) v += a[static_cast<std::size_t>(i)];
        if (k == i) v -= a[static_cast<std::size_t>(j)];
        p.t[idx3(n, k, i, j)] = lift_gauss<V>(v);
      }
  return p;
}

/// Same with s the polynomial variable.
FormalPoint<GaussPoly> lck_symbolic(const std::vector<GaussRational>& a);

/// Largest cyclic residual sum_cyc T^r_jk T^l_ir and T^i_jk eta_i; both must
/// vanish on the LCK family.
template <class V>
CheckReport family_invariants(const FormalPoint<V>& p, double tol = 1e-10) {
  const int n = p.n;
  CheckItem cyc{"cyclic torsion identity"};
  CheckItem trace{"T^i_jk eta_i = 0"};
  CheckItem anti{"T antisymmetric"};
  const auto eta = p.eta();
  const V zero = ScalarTraits<V>::zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        record(anti, p.T(k, i, j), -p.T(k, j, i), tol);
        for (int l = 0; l < n; ++l) {
          V sum = zero;
          for (int r = 0; r < n; ++r)
            sum += p.T(r, j, k) * p.T(l, i, r) + p.T(r, k, i) * p.T(l, j, r) + p.T(r, i, j) * p.T(l, k, r);
          record(cyc, sum, zero, tol, "(i,j,k,l)");
        }
      }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      V sum = zero;
      for (int i = 0; i < n; ++i) sum += p.T(i, j, k) * eta[static_cast<std::size_t>(i)];
      record(trace, sum, zero, tol);
    }
  return {{anti, cyc, trace}};
}

// ---------------------------------------------------------------------------
// Substitution rules

/// c T^k_{ij,l} = -c (s-2) T^r_ij T^k_rl; `coef` is -c(s-2).
template <class X, class V>
X rule_hol(const std::vector<X>& t, int n, const V& coef, int i, int j, int k, int l) {
  X acc = ScalarTraits<X>::zero();
  for (int r = 0; r < n; ++r) acc += t[idx3(n, r, i, j)] * t[idx3(n, k, r, l)];
  return acc * coef;
}

/// c T^k_{ij,lbar}; tb holds the conjugated components.
template <class X, class V>
X rule_bar(const std::vector<X>& t, const std::vector<X>& tb, int n, const V& a, const V& b, const V& s3, int i, int j,
           int k, int l) {
  X sa = ScalarTraits<X>::zero(), sb = sa, sc = sa;
  for (int r = 0; r < n; ++r) {
    sa += t[idx3(n, r, i, j)] * tb[idx3(n, r, k, l)];
    sb += t[idx3(n, k, i, r)] * tb[idx3(n, j, l, r)] - t[idx3(n, k, j, r)] * tb[idx3(n, i, l, r)];
    sc += t[idx3(n, l, i, r)] * tb[idx3(n, j, k, r)] - t[idx3(n, l, j, r)] * tb[idx3(n, i, k, r)];
  }
  return sa * a + sb * b + sc * s3;
}

// ---------------------------------------------------------------------------
// Derivative tables

/// Torsion values with c-scaled first and c^2-scaled second derivatives.
/// d2(k,i,j,d1,d2) is T^k_{ij,d1 d2}: derivative in d1 first, then d2.
template <class V>
class DerivativeTable {
 public:
  DerivativeTable(int n, V s, V c, std::vector<V> t) : n_(n), s_(std::move(s)), c_(std::move(c)), t_(std::move(t)) {
    const std::size_t comps = static_cast<std::size_t>(n * n * n);
    if (t_.size() != comps) throw std::invalid_argument("torsion table has wrong size");
    tb_.reserve(comps);
    for (const auto& x : t_) tb_.push_back(conj_of(x));
    d1_.assign(comps * static_cast<std::size_t>(2 * n), ScalarTraits<V>::zero());
    d2_.assign(comps * static_cast<std::size_t>(4 * n * n), std::nullopt);
  }

  int n() const { return n_; }
  const V& s() const { return s_; }
  /// The scale c(s) carried by each barred derivative.
  const V& c() const { return c_; }
  const std::vector<V>& t() const { return t_; }
  const std::vector<V>& tb() const { return tb_; }
  const V& T(int k, int i, int j) const { return t_[idx3(n_, k, i, j)]; }
  const V& Tb(int k, int i, int j) const { return tb_[idx3(n_, k, i, j)]; }

  const V& d1(int k, int i, int j, int dir) const { return d1_[idx3(n_, k, i, j) * dirs() + static_cast<std::size_t>(dir)]; }
  V& d1(int k, int i, int j, int dir) { return d1_[idx3(n_, k, i, j) * dirs() + static_cast<std::size_t>(dir)]; }

  bool has_d2(int k, int i, int j, int a, int b) const { return d2_[d2_index(k, i, j, a, b)].has_value(); }
  const V& d2(int k, int i, int j, int a, int b) const {
    const auto& v = d2_[d2_index(k, i, j, a, b)];
    if (!v) throw std::logic_error("second derivative not tabulated for this direction pair");
    return *v;
  }
  void set_d2(int k, int i, int j, int a, int b, V v) { d2_[d2_index(k, i, j, a, b)] = std::move(v); }

  /// First-order jets of T (value plus c-scaled gradient).
  std::vector<Jet<V>> jets() const {
    std::vector<Jet<V>> out;
    out.reserve(t_.size());
    for (std::size_t comp = 0; comp < t_.size(); ++comp) {
      std::vector<V> g(d1_.begin() + static_cast<std::ptrdiff_t>(comp * dirs()),
                       d1_.begin() + static_cast<std::ptrdiff_t>((comp + 1) * dirs()));
      out.emplace_back(t_[comp], std::move(g));
    }
    return out;
  }

 private:
  std::size_t dirs() const { return static_cast<std::size_t>(2 * n_); }
  std::size_t d2_index(int k, int i, int j, int a, int b) const {
    return (idx3(n_, k, i, j) * dirs() + static_cast<std::size_t>(a)) * dirs() + static_cast<std::size_t>(b);
  }

  int n_;
  V s_, c_;
  std::vector<V> t_, tb_;
  std::vector<V> d1_;
  std::vector<std::optional<V>> d2_;
};

/// Fills the table from the substitution rules with the true a, b, c.
/// Second derivatives are tabulated for barred first directions only, which
/// is all the lemma checks consume.
template <class V>
DerivativeTable<V> first_derivatives(const FormalPoint<V>& p) {
  const int n = p.n;
  const auto pc = point_coefficients(standard_claims(), p.s);
  DerivativeTable<V> tab(n, p.s, pc.c, p.t);
  const V hol_coef = -(pc.c * (p.s - V(2)));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          tab.d1(k, i, j, l) = rule_hol(tab.t(), n, hol_coef, i, j, k, l);
          tab.d1(k, i, j, n + l) = rule_bar(tab.t(), tab.tb(), n, pc.a, pc.b, pc.s3, i, j, k, l);
        }
  return tab;
}

/// first_derivatives plus the c^2-scaled second derivatives T_{,lbar d}.
template <class V>
DerivativeTable<V> derivative_table(const FormalPoint<V>& p) {
  DerivativeTable<V> tab = first_derivatives(p);
  const int n = p.n;
  const auto pc = point_coefficients(standard_claims(), p.s);
  const std::vector<Jet<V>> t1 = tab.jets();
  std::vector<Jet<V>> t1b;
  t1b.reserve(t1.size());
  for (const auto& j : t1) t1b.push_back(conj_jet(j));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const Jet<V> r = rule_bar(t1, t1b, n, pc.a, pc.b, pc.s3, i, j, k, l);
          for (int d = 0; d < 2 * n; ++d) tab.set_d2(k, i, j, n + l, d, r.d(static_cast<std::size_t>(d)));
        }
  return tab;
}

// ---------------------------------------------------------------------------
// Contractions

template <class X>
struct Contractions {
  int n = 0;
  std::vector<X> eta, etab;
  std::vector<X> U, V, W;   // n x n, row-major (first index, second index)
  std::vector<X> Xt, Yt, Zt;  // idx3(i, p, l); only filled when requested
  X A, At, B, C, norm_T, norm_eta;

  const X& u(int i, int j) const { return U[static_cast<std::size_t>(i * n + j)]; }
  const X& v(int i, int j) const { return V[static_cast<std::size_t>(i * n + j)]; }
  const X& w(int i, int j) const { return W[static_cast<std::size_t>(i * n + j)]; }
  const X& x(int i, int p, int l) const { return Xt[idx3(n, i, p, l)]; }
  const X& y(int i, int p, int l) const { return Yt[idx3(n, i, p, l)]; }
  const X& z(int i, int p, int l) const { return Zt[idx3(n, i, p, l)]; }
};

/// U^i_j = T^i_jk etabar_k, V_ij = T^r_ik Tbar^r_jk, W^ij = T^i_kl Tbar^j_kl,
/// A = V_kp U^k_p, At = W^kr U^r_k, B = U^k_p U^p_k, C = |U|^2, and
/// X^i_pl = T^k_pj T^r_kl Tbar^r_ij, Y^i_pl = T^k_rj T^r_kp Tbar^l_ij,
/// Z^i_pl = T^k_jp T^i_kr Tbar^l_jr.
template <class X>
Contractions<X> contractions(int n, const std::vector<X>& t, const std::vector<X>& tb, bool with_xyz = true) {
  const X zero = ScalarTraits<X>::zero();
  auto T = [&](int k, int i, int j) -> const X& { return t[idx3(n, k, i, j)]; };
  auto Tb = [&](int k, int i, int j) -> const X& { return tb[idx3(n, k, i, j)]; };
  Contractions<X> c;
  c.n = n;
  const std::size_t n1 = static_cast<std::size_t>(n);
  c.eta.assign(n1, zero);
  c.etab.assign(n1, zero);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      c.eta[static_cast<std::size_t>(j)] += T(k, k, j);
      c.etab[static_cast<std::size_t>(j)] += Tb(k, k, j);
    }
  c.U.assign(n1 * n1, zero);
  c.V.assign(n1 * n1, zero);
  c.W.assign(n1 * n1, zero);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      X& u = c.U[static_cast<std::size_t>(i * n + j)];
      X& v = c.V[static_cast<std::size_t>(i * n + j)];
      X& w = c.W[static_cast<std::size_t>(i * n + j)];
      for (int k = 0; k < n; ++k) {
        u += T(i, j, k) * c.etab[static_cast<std::size_t>(k)];
        for (int r = 0; r < n; ++r) {
          v += T(r, i, k) * Tb(r, j, k);
          w += T(i, k, r) * Tb(j, k, r);
        }
      }
    }
  c.A = c.At = c.B = c.C = c.norm_T = c.norm_eta = zero;
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < n; ++p) {
      c.A += c.v(k, p) * c.u(k, p);
      c.At += c.w(k, p) * c.u(p, k);
      c.B += c.u(k, p) * c.u(p, k);
      c.C += c.u(k, p) * conj_of(c.u(k, p));
    }
  for (std::size_t m = 0; m < t.size(); ++m) c.norm_T += t[m] * tb[m];
  for (std::size_t j = 0; j < n1; ++j) c.norm_eta += c.eta[j] * c.etab[j];
  if (with_xyz) {
    c.Xt.assign(n1 * n1 * n1, zero);
    c.Yt.assign(n1 * n1 * n1, zero);
    c.Zt.assign(n1 * n1 * n1, zero);
    for (int i = 0; i < n; ++i)
      for (int p = 0; p < n; ++p)
        for (int l = 0; l < n; ++l) {
          X x = zero, y = zero, z = zero;
          for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
              for (int r = 0; r < n; ++r) {
                x += T(k, p, j) * T(r, k, l) * Tb(r, i, j);
                y += T(k, r, j) * T(r, k, p) * Tb(l, i, j);
                z += T(k, j, p) * T(i, k, r) * Tb(l, j, r);
              }
          c.Xt[idx3(n, i, p, l)] = x;
          c.Yt[idx3(n, i, p, l)] = y;
          c.Zt[idx3(n, i, p, l)] = z;
        }
  }
  return c;
}

template <class V>
Contractions<V> contractions(const FormalPoint<V>& p, bool with_xyz = true) {
  std::vector<V> tb;
  tb.reserve(p.t.size());
  for (const auto& x : p.t) tb.push_back(conj_of(x));
  return contractions(p.n, p.t, tb, with_xyz);
}

// ---------------------------------------------------------------------------
// Checks. Every closed form is evaluated with the claimed coefficients; the
// derivatives come from the table. Exact backends demand zero residual.

template <class V>
struct CheckContext {
  DerivativeTable<V> tab;
  PointCoefficients<V> pc;
  Contractions<V> k;
  Contractions<Jet<V>> k1;  // contractions of the first-order jets
  V cG;                     // c <d|eta|^2, etabar>
  V cdT;                    // c <d|T|^2, etabar>
  double tol;

  CheckContext(DerivativeTable<V> table, const Claims& claims, double tolerance)
      : tab(std::move(table)), pc(point_coefficients(claims, tab.s())), tol(tolerance) {
    const int n = tab.n();
    k = contractions(n, tab.t(), tab.tb(), true);
    const auto t1 = tab.jets();
    std::vector<Jet<V>> t1b;
    t1b.reserve(t1.size());
    for (const auto& j : t1) t1b.push_back(conj_jet(j));
    k1 = contractions(n, t1, t1b, false);
    cG = cdT = ScalarTraits<V>::zero();
    for (int l = 0; l < n; ++l) {
      cG += k1.norm_eta.d(static_cast<std::size_t>(l)) * k.etab[static_cast<std::size_t>(l)];
      cdT += k1.norm_T.d(static_cast<std::size_t>(l)) * k.etab[static_cast<std::size_t>(l)];
    }
  }

  int n() const { return tab.n(); }
  /// c eta_{j,dir}
  V eta1(int j, int dir) const {
    V acc = ScalarTraits<V>::zero();
    for (int q = 0; q < n(); ++q) acc += tab.d1(q, q, j, dir);
    return acc;
  }
  /// c^2 eta_{j,d1 d2}
  V eta2(int j, int a, int b) const {
    V acc = ScalarTraits<V>::zero();
    for (int q = 0; q < n(); ++q) acc += tab.d2(q, q, j, a, b);
    return acc;
  }
  const V& etab(int j) const { return k.etab[static_cast<std::size_t>(j)]; }
  const V& eta(int j) const { return k.eta[static_cast<std::size_t>(j)]; }
};

inline std::string tuple_str(std::initializer_list<int> idx) {
  std::string s = "(";
  bool first = true;
  for (int i : idx) {
    if (!first) s += ",";
    s += std::to_string(i + 1);
    first = false;
  }
  return s + ")";
}

/// Torsion-identity rules: T_{,l}, the (s-1)-weighted cyclic sum, c T_{,lbar}.
template <class V>
CheckReport torsion_identity_checks(const CheckContext<V>& cx) {
  const int n = cx.n();
  const auto& pc = cx.pc;
  const auto& tab = cx.tab;
  CheckItem i1{"torsion identity (1)"}, i2{"torsion identity (2)"}, i3{"torsion identity (3)"};
  const V zero = ScalarTraits<V>::zero();
  const V hol_coef = -(tab.c() * (pc.s - V(2)));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          const auto where = tuple_str({k, i, j, l});
          record(i1, tab.d1(k, i, j, l), rule_hol(tab.t(), n, hol_coef, i, j, k, l), cx.tol, where);
          record(i3, tab.d1(k, i, j, n + l), rule_bar(tab.t(), tab.tb(), n, pc.a, pc.b, pc.s3, i, j, k, l), cx.tol,
                 where);
          V cyc = zero;
          for (int r = 0; r < n; ++r)
            cyc += tab.T(r, j, k) * tab.T(l, i, r) + tab.T(r, k, i) * tab.T(l, j, r) + tab.T(r, i, j) * tab.T(l, k, r);
          record(i2, (pc.s - V(1)) * cyc, zero, cx.tol, where);
        }
  return {{i1, i2, i3}};
}

/// Traced identities for eta, items (1)-(5).
template <class V>
CheckReport eta_identity_checks(const CheckContext<V>& cx) {
  const int n = cx.n();
  const auto& pc = cx.pc;
  const auto& tab = cx.tab;
  const V zero = ScalarTraits<V>::zero();
  const V c = tab.c();
  CheckItem e1{"eta identity (1)"}, e2{"eta identity (2)"}, e3{"eta identity (3)"}, e4{"eta identity (4)"},
      e5{"eta identity (5)"};
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      V rhs = zero;
      for (int r = 0; r < n; ++r)
        for (int i = 0; i < n; ++i) rhs += tab.T(r, i, k) * tab.T(i, r, l);
      record(e1, cx.eta1(k, l), -(c * (pc.s - V(2))) * rhs, cx.tol, tuple_str({k, l}));
      V tr = zero;
      for (int i = 0; i < n; ++i) tr += tab.T(i, l, k) * cx.eta(i);
      record(e2, (pc.s - V(1)) * tr, zero, cx.tol, tuple_str({l, k}));
    }
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      V vs = zero, us = zero, ws = zero, u2 = zero;
      for (int p = 0; p < n; ++p) {
        us += cx.eta(p) * tab.Tb(j, l, p);
        u2 += tab.T(l, j, p) * cx.etab(p);
        for (int k = 0; k < n; ++k) {
          vs += tab.T(p, k, j) * tab.Tb(p, k, l);
          ws += tab.T(l, k, p) * tab.Tb(j, k, p);
        }
      }
      record(e3, cx.eta1(j, n + l), (pc.a - pc.b) * vs + pc.b * us + pc.s3 * (ws - u2), cx.tol, tuple_str({j, l}));
    }
  V trace = zero;
  for (int r = 0; r < n; ++r) trace += cx.eta1(r, n + r);
  record(e4, V(2) * (V(2) * pc.s - V(1)) * trace,
         c * (pc.s * pc.s * cx.k.norm_T + pc.s * (V(2) - V(3) * pc.s) * cx.k.norm_eta), cx.tol);
  for (int l = 0; l < n; ++l) {
    V lhs = zero, rhs = zero;
    for (int j = 0; j < n; ++j) {
      lhs += cx.eta1(j, n + l) * cx.etab(j);
      for (int p = 0; p < n; ++p)
        for (int k = 0; k < n; ++k) rhs += tab.T(p, k, j) * tab.Tb(p, k, l) * cx.etab(j);
    }
    record(e5, lhs, (pc.a - pc.b) * rhs, cx.tol, tuple_str({l}));
  }
  return {{e1, e2, e3, e4, e5}};
}

template <class V>
CheckReport norm_derivative_checks(const CheckContext<V>& cx) {
  const auto& pc = cx.pc;
  const auto& k = cx.k;
  CheckItem i1{"norm derivative (1): At = 2A"}, i2{"norm derivative (2)"}, i3{"norm derivative (3)"};
  record(i1, k.At, V(2) * k.A, cx.tol);
  const V s = pc.s;
  record(i2, cx.cdT, -(V(2) * (s - V(2)) * (V(7) * s * s - V(12) * s + V(4))) * k.A, cx.tol);
  record(i3, cx.cG, -(pc.c * (s - V(2))) * k.B + (pc.a - pc.b) * k.C, cx.tol);
  return {{i1, i2, i3}};
}

template <class V>
CheckReport xyz_trace_checks(const CheckContext<V>& cx) {
  const int n = cx.n();
  const auto& k = cx.k;
  const V zero = ScalarTraits<V>::zero();
  V xp = zero, xi = zero, yp = zero, yi = zero, zp = zero, zi = zero;
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p) {
      xp += k.x(i, p, i) * cx.etab(p);
      xi += k.x(i, i, p) * cx.etab(p);
      yp += k.y(i, p, i) * cx.etab(p);
      yi += k.y(i, i, p) * cx.etab(p);
      zp += k.z(i, p, i) * cx.etab(p);
      zi += k.z(i, i, p) * cx.etab(p);
    }
  CheckItem a{"X^i_pi etabar_p = A"}, b{"X^i_il etabar_l = 2A"}, c{"Y^i_pi etabar_p = B"}, d{"Y^i_il etabar_l = 0"},
      e{"Z^i_pi etabar_p = A"}, f{"Z^i_il etabar_l = 0"};
  record(a, xp, k.A, cx.tol);
  record(b, xi, V(2) * k.A, cx.tol);
  record(c, yp, k.B, cx.tol);
  record(d, yi, zero, cx.tol);
  record(e, zp, k.A, cx.tol);
  record(f, zi, zero, cx.tol);
  return {{a, b, c, d, e, f}};
}

template <class V>
CheckReport uvw_derivative_checks(const CheckContext<V>& cx) {
  const int n = cx.n();
  const auto& pc = cx.pc;
  const auto& k = cx.k;
  const auto& k1 = cx.k1;
  const auto& tab = cx.tab;
  const V zero = ScalarTraits<V>::zero();
  const V cs2 = pc.c * (pc.s - V(2));
  auto jet_d = [&](const std::vector<Jet<V>>& m, int i, int j, int dir) -> const V& {
    return m[static_cast<std::size_t>(i * n + j)].d(static_cast<std::size_t>(dir));
  };
  CheckItem u1{"U derivative (1): c U^p_{q,l}"}, u2{"U derivative (2): c U^k_{i,lbar}"},
      v3{"V derivative (3)"}, w4{"W derivative (4)"};
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int l = 0; l < n; ++l) {
        V rhs = zero;
        for (int r = 0; r < n; ++r)
          rhs += -(cs2 * tab.T(p, r, l) * k.u(r, q)) +
                 tab.T(p, q, r) * ((pc.a - pc.b) * k.v(l, r) + pc.b * k.u(r, l) + pc.s3 * k.w(r, l) -
                                   pc.s3 * conj_of(k.u(l, r)));
        record(u1, jet_d(k1.U, p, q, l), rhs, cx.tol, tuple_str({p, q, l}));
      }
  for (int kk = 0; kk < n; ++kk)
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        V rhs = zero;
        for (int r = 0; r < n; ++r)
          rhs += pc.a * k.u(r, i) * tab.Tb(r, kk, l) - pc.b * k.u(kk, r) * tab.Tb(i, r, l) -
                 pc.s3 * k.u(l, r) * tab.Tb(i, r, kk);
        rhs -= cs2 * conj_of(k.y(i, l, kk));
        record(u2, jet_d(k1.U, kk, i, n + l), rhs, cx.tol, tuple_str({kk, i, l}));
      }
  for (int p = 0; p < n; ++p)
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        V rhs = (pc.a - cs2) * k.x(i, p, l) - pc.b * k.x(i, l, p) - pc.s3 * k.y(i, p, l) + pc.s3 * k.z(i, p, l);
        for (int r = 0; r < n; ++r) rhs -= pc.b * k.v(p, r) * tab.T(i, r, l);
        record(v3, jet_d(k1.V, p, i, l), rhs, cx.tol, tuple_str({p, i, l}) + " hol");
        record(v3, conj_of(jet_d(k1.V, i, p, n + l)), rhs, cx.tol, tuple_str({p, i, l}) + " bar");
      }
  for (int p = 0; p < n; ++p)
    for (int kk = 0; kk < n; ++kk)
      for (int l = 0; l < n; ++l) {
        V rhs = -(V(2) * pc.b * k.z(p, l, kk)) - V(2) * pc.s3 * k.z(p, kk, l);
        for (int r = 0; r < n; ++r) rhs += pc.a * k.w(p, r) * tab.T(r, kk, l) - cs2 * k.w(r, kk) * tab.T(p, r, l);
        record(w4, jet_d(k1.W, p, kk, l), rhs, cx.tol, tuple_str({p, kk, l}) + " hol");
        record(w4, conj_of(jet_d(k1.W, kk, p, n + l)), rhs, cx.tol, tuple_str({p, kk, l}) + " bar");
      }
  return {{u1, u2, v3, w4}};
}

/// The four c^2-scaled second-derivative contractions of eta.
template <class V>
struct EtaSecond {
  V lbar_l;        // c^2 eta_{j,lbar l} etabar_j
  V jbar_l;        // c^2 eta_{j,jbar l} etabar_l
  V lbar_jbar;     // c^2 conj(eta_{j,lbar jbar} eta_l)
  V torsion_ibar_jbar;  // c^2 conj(T^k_{ij,ibar jbar} eta_k)
};

template <class V>
EtaSecond<V> eta_second(const CheckContext<V>& cx) {
  const int n = cx.n();
  const V zero = ScalarTraits<V>::zero();
  EtaSecond<V> e{zero, zero, zero, zero};
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      e.lbar_l += cx.eta2(j, n + l, l) * cx.etab(j);
      e.jbar_l += cx.eta2(j, n + j, l) * cx.etab(l);
      e.lbar_jbar += conj_of(cx.eta2(j, n + l, n + j)) * cx.etab(l);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) e.torsion_ibar_jbar += conj_of(cx.tab.d2(k, i, j, n + i, n + j)) * cx.etab(k);
  return e;
}

template <class V>
CheckReport eta_second_derivative_checks(const CheckContext<V>& cx) {
  const auto& pc = cx.pc;
  const auto& k = cx.k;
  const V &a = pc.a, &b = pc.b, &s3 = pc.s3;
  const V s6 = s3 * s3;
  const V cs2 = pc.c * (pc.s - V(2));
  const EtaSecond<V> e = eta_second(cx);
  CheckItem i1{"eta second derivative (1)"}, i2{"eta second derivative (2)"}, i3{"eta second derivative (3)"},
      i4{"eta second derivative (4)"};
  record(i1, e.lbar_l,
         ((a - b) * (-cs2 + a - V(2) * b + V(2) * s3) - V(2) * a * s3) * k.A + (V(2) * b - a) * s3 * k.B -
             (b * b + b * s3 + s6) * k.C,
         cx.tol);
  record(i2, e.jbar_l, V(2) * (a - b + s3) * (a - b - cs2) * k.A + (b - s3) * cx.cG, cx.tol);
  record(i3, e.lbar_jbar,
         ((a - b) * (a - V(3) * b + s3 - cs2) - V(2) * s3 * (a + b + s3)) * k.A - ((a - b) * s3 + b * b) * k.B +
             (b * (a - b + s3) + s3 * (a + s3)) * k.C,
         cx.tol);
  record(i4, e.torsion_ibar_jbar,
         ((a + s3) * (-a - s3 + cs2) - s3 * (a - b + V(2) * s3)) * k.A + s3 * (a - b + s3) * k.B + s6 * k.C, cx.tol);
  return {{i1, i2, i3, i4}};
}

/// Assembled second-derivative expressions for rows 2-4 of the linear system.
template <class V>
std::array<V, 3> row_expressions(const CheckContext<V>& cx) {
  const int n = cx.n();
  const auto& tab = cx.tab;
  const V zero = ScalarTraits<V>::zero();
  const V c = tab.c();
  const V s = tab.s();
  V row2 = zero, row3 = zero, row4 = zero;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      row2 += (conj_of(cx.eta2(j, n + l, n + j)) - conj_of(cx.eta2(j, n + j, n + l))) * cx.etab(l);
      row3 += (cx.eta2(j, n + l, l) - cx.eta2(l, n + l, j)) * cx.etab(j);
      for (int k = 0; k < n; ++k) {
        row2 += V(2) * c * (V(1) - s) * tab.T(k, j, l) * conj_of(cx.eta1(j, n + k)) * cx.etab(l);
        row3 -= c * s * tab.T(l, j, k) * cx.eta1(l, n + k) * cx.etab(j);
      }
    }
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      row3 += c * s * (cx.eta(k) * cx.eta1(j, n + k) - cx.etab(k) * cx.eta1(j, k)) * cx.etab(j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        row4 += conj_of(tab.d2(k, i, j, n + i, n + j)) * cx.etab(k);
        for (int l = 0; l < n; ++l)
          row4 += c * (s - V(1)) * tab.T(l, i, j) * conj_of(tab.d1(k, i, j, n + l)) * cx.etab(k);
      }
  return {row2, row3, row4};
}

/// Row forms M(r, .) . (A, B, C, G) for r = 1..4, with the gradient column
/// divided by c so that the c-scaled cG can be used.
template <class V>
std::array<V, 4> row_forms(const CheckContext<V>& cx, const Claims& claims) {
  const PolyMatrix m = system_matrix(claims);
  const V& s = cx.tab.s();
  std::array<V, 4> out;
  for (int r = 0; r < 4; ++r) {
    const RationalPoly grad = m(r, 3).exact_div(claims.c);
    out[static_cast<std::size_t>(r)] = eval_poly(m(r, 0), s) * cx.k.A + eval_poly(m(r, 1), s) * cx.k.B +
                                       eval_poly(m(r, 2), s) * cx.k.C + eval_poly(grad, s) * cx.cG;
  }
  return out;
}

template <class V>
CheckReport linear_system_row_checks(const CheckContext<V>& cx, const Claims& claims) {
  CheckItem r2{"linear system row 2"}, r3{"linear system row 3"}, r4{"linear system row 4"};
  std::array<V, 4> forms;
  try {
    forms = row_forms(cx, claims);
  } catch (const std::domain_error& e) {
    for (auto* it : {&r2, &r3, &r4}) {
      it->pass = false;
      it->detail = std::string("gradient column not divisible by c: ") + e.what();
    }
    return {{r2, r3, r4}};
  }
  const auto rows = row_expressions(cx);
  record(r2, rows[0], forms[1], cx.tol);
  record(r3, rows[1], forms[2], cx.tol);
  record(r4, rows[2], forms[3], cx.tol);
  return {{r2, r3, r4}};
}

/// The full formal suite, grouped as the CLI reports it.
template <class V>
CheckReport formal_suite(const DerivativeTable<V>& tab, const Claims& claims, double tol = 0.0) {
  const CheckContext<V> cx(tab, claims, tol);
  CheckReport out = norm_derivative_checks(cx);
  out.append(xyz_trace_checks(cx));
  out.append(uvw_derivative_checks(cx));
  out.append(eta_second_derivative_checks(cx));
  out.append(linear_system_row_checks(cx, claims));
  return out;
}

}  // namespace gauduchon
