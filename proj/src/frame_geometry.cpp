#include "gauduchon/frame_geometry.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <sstream>

namespace gauduchon {

std::string to_string(ValidationKind k) {
  switch (k) {
    case ValidationKind::Shape: return "shape";
    case ValidationKind::DSquared: return "d-squared";
    case ValidationKind::Jacobi: return "jacobi";
    case ValidationKind::JSquared: return "j-squared";
    case ValidationKind::Nijenhuis: return "nijenhuis";
    case ValidationKind::MetricCompat: return "metric-compat";
    case ValidationKind::Integrability: return "integrability";
    case ValidationKind::Reality: return "reality";
  }
  return "unknown";
}

namespace {

std::string join_failures(const std::vector<ValidationFailure>& fs) {
  std::string out = "model validation failed:";
  for (const auto& f : fs) out += " [" + to_string(f.kind) + "] " + f.message + ";";
  return out;
}

template <class S>
S half() {
  return ScalarTraits<S>::lift(Rational(1, 2));
}

template <class S>
bool small(const S& z, double tol) {
  if constexpr (ScalarTraits<S>::exact) return exactly_zero(z);
  else return magnitude(z) <= tol;
}

int bar(int a, int n) { return a < n ? a + n : a - n; }

}  // namespace

ValidationError::ValidationError(std::vector<ValidationFailure> failures)
    : std::runtime_error(join_failures(failures)), failures_(std::move(failures)) {}

// ---------------------------------------------------------------------------
// Inputs

StructureEquations::StructureEquations(int dim) : n(dim) {
  if (dim <= 0) throw std::invalid_argument("structure equations need n >= 1");
  A.assign(static_cast<std::size_t>(dim * dim * dim), GaussRational());
  B = A;
}

void StructureEquations::add_20(int k, int i, int j, const GaussRational& c) {
  if (k < 0 || i < 0 || j < 0 || k >= n || i >= n || j >= n) throw std::out_of_range("coframe index out of range");
  if (i == j) return;
  A[idx3(n, k, i, j)] += c;
  A[idx3(n, k, j, i)] -= c;
}

void StructureEquations::add_11(int k, int i, int j, const GaussRational& c) {
  if (k < 0 || i < 0 || j < 0 || k >= n || i >= n || j >= n) throw std::out_of_range("coframe index out of range");
  B[idx3(n, k, i, j)] += c;
}

RealLieData::RealLieData(int d) : dim(d), f(static_cast<std::size_t>(d * d * d), 0.0), J(d, d), g(Matrix<double>::identity(d)) {
  if (d <= 0 || d % 2 != 0) throw std::invalid_argument("real Lie data needs a positive even dimension");
}

void RealLieData::set_bracket(int k, int i, int j, double v) {
  if (k < 0 || i < 0 || j < 0 || k >= dim || i >= dim || j >= dim) throw std::out_of_range("basis index out of range");
  if (i == j) throw std::invalid_argument("bracket [x_i, x_i] must vanish");
  bracket(k, i, j) = v;
  bracket(k, j, i) = -v;
}

namespace {

HermitianModel<GaussRational> raw_model(const StructureEquations& se) {
  const int n = se.n;
  HermitianModel<GaussRational> m(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const GaussRational c = -se.a(k, i, j);
        m.F(k, i, j) = c;
        m.F(n + k, n + i, n + j) = conj(c);
        // [e_i, ebar_j] = -B^k_ij e_k + conj(B^k_ji) ebar_k
        const GaussRational d = -se.b(k, i, j);
        const GaussRational e = conj(se.b(k, j, i));
        m.F(k, i, n + j) = d;
        m.F(n + k, i, n + j) = e;
        m.F(k, n + j, i) = -d;
        m.F(n + k, n + j, i) = -e;
      }
  return m;
}

}  // namespace

std::vector<ValidationFailure> validate(const StructureEquations& se) {
  std::vector<ValidationFailure> out;
  const std::size_t want = static_cast<std::size_t>(se.n * se.n * se.n);
  if (se.n <= 0 || se.A.size() != want || se.B.size() != want) {
    out.push_back({ValidationKind::Shape, "coefficient arrays do not match n", 0.0});
    return out;
  }
  for (int k = 0; k < se.n; ++k)
    for (int i = 0; i < se.n; ++i)
      for (int j = 0; j < se.n; ++j)
        if (se.a(k, i, j) != -se.a(k, j, i)) {
          out.push_back({ValidationKind::Shape, "(2,0) coefficients not antisymmetric", 0.0});
          return out;
        }
  for (auto f : validate_model(raw_model(se), 0.0)) {
    if (f.kind == ValidationKind::Jacobi) f.kind = ValidationKind::DSquared;
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

std::vector<double> real_bracket(const RealLieData& rl, const std::vector<double>& u, const std::vector<double>& v) {
  const int d = rl.dim;
  std::vector<double> out(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    if (u[static_cast<std::size_t>(i)] == 0.0) continue;
    for (int j = 0; j < d; ++j) {
      const double w = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
      if (w == 0.0) continue;
      for (int k = 0; k < d; ++k) out[static_cast<std::size_t>(k)] += w * rl.bracket(k, i, j);
    }
  }
  return out;
}

std::vector<double> mat_vec(const Matrix<double>& a, const std::vector<double>& v) {
  std::vector<double> out(static_cast<std::size_t>(a.rows()), 0.0);
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out[static_cast<std::size_t>(r)] += a(r, c) * v[static_cast<std::size_t>(c)];
  return out;
}

std::vector<double> basis(int d, int i) {
  std::vector<double> e(static_cast<std::size_t>(d), 0.0);
  e[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

bool positive_definite(const Matrix<double>& g) {
  // Cholesky
  const int d = g.rows();
  Matrix<double> l(d, d);
  for (int j = 0; j < d; ++j) {
    double diag = g(j, j);
    for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0)) return false;
    l(j, j) = std::sqrt(diag);
    for (int i = j + 1; i < d; ++i) {
      double v = g(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return true;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

std::vector<ValidationFailure> validate(const RealLieData& rl, double tol) {
  std::vector<ValidationFailure> out;
  const int d = rl.dim;
  if (d <= 0 || d % 2 != 0 || rl.f.size() != static_cast<std::size_t>(d * d * d) || rl.J.rows() != d ||
      rl.J.cols() != d || rl.g.rows() != d || rl.g.cols() != d) {
    out.push_back({ValidationKind::Shape, "dimension mismatch between brackets, J and g", 0.0});
    return out;
  }
  double anti = 0.0;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) anti = std::max(anti, std::fabs(rl.bracket(k, i, j) + rl.bracket(k, j, i)));
  if (anti > tol) out.push_back({ValidationKind::Shape, "brackets not antisymmetric", anti});

  double jac = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = j + 1; k < d; ++k) {
        const auto xi = basis(d, i), xj = basis(d, j), xk = basis(d, k);
        const auto a = real_bracket(rl, real_bracket(rl, xi, xj), xk);
        const auto b = real_bracket(rl, real_bracket(rl, xj, xk), xi);
        const auto c = real_bracket(rl, real_bracket(rl, xk, xi), xj);
        for (int r = 0; r < d; ++r) {
          const auto ur = static_cast<std::size_t>(r);
          jac = std::max(jac, std::fabs(a[ur] + b[ur] + c[ur]));
        }
      }
  if (jac > tol) out.push_back({ValidationKind::Jacobi, "Jacobi identity fails, residual " + fmt(jac), jac});

  const double jsq = (rl.J * rl.J + Matrix<double>::identity(d)).max_abs();
  if (jsq > tol) out.push_back({ValidationKind::JSquared, "J^2 != -I, residual " + fmt(jsq), jsq});

  double nij = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const auto x = basis(d, i), y = basis(d, j);
      const auto jx = mat_vec(rl.J, x), jy = mat_vec(rl.J, y);
      const auto t1 = real_bracket(rl, jx, jy);
      const auto t2 = mat_vec(rl.J, real_bracket(rl, jx, y));
      const auto t3 = mat_vec(rl.J, real_bracket(rl, x, jy));
      const auto t4 = real_bracket(rl, x, y);
      for (int r = 0; r < d; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        nij = std::max(nij, std::fabs(t1[ur] - t2[ur] - t3[ur] - t4[ur]));
      }
    }
  if (nij > tol) out.push_back({ValidationKind::Nijenhuis, "Nijenhuis tensor nonzero, residual " + fmt(nij), nij});

  const double sym = (rl.g - rl.g.transpose()).max_abs();
  const double compat = (rl.J.transpose() * rl.g * rl.J - rl.g).max_abs();
  if (sym > tol || !positive_definite(rl.g))
    out.push_back({ValidationKind::MetricCompat, "g is not symmetric positive definite", sym});
  else if (compat > tol)
    out.push_back({ValidationKind::MetricCompat, "g(J., J.) != g, residual " + fmt(compat), compat});
  return out;
}

template <class S>
std::vector<ValidationFailure> validate_model(const HermitianModel<S>& m, double tol) {
  std::vector<ValidationFailure> out;
  const int n = m.n, d = m.dirs();
  if (m.f.size() != static_cast<std::size_t>(d * d * d)) {
    out.push_back({ValidationKind::Shape, "structure constant array does not match n", 0.0});
    return out;
  }
  double anti = 0.0, integ = 0.0, real = 0.0, jac = 0.0;
  bool anti_ok = true, integ_ok = true, real_ok = true, jac_ok = true;
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const S sum = m.F(c, a, b) + m.F(c, b, a);
        anti = std::max(anti, magnitude(sum));
        anti_ok = anti_ok && small(sum, tol);
        const S rd = m.F(bar(c, n), bar(a, n), bar(b, n)) - conj_of(m.F(c, a, b));
        real = std::max(real, magnitude(rd));
        real_ok = real_ok && small(rd, tol);
      }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const S& z = m.F(n + k, i, j);
        integ = std::max(integ, magnitude(z));
        integ_ok = integ_ok && small(z, tol);
      }
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          S acc = ScalarTraits<S>::zero();
          for (int x = 0; x < d; ++x)
            acc += m.F(x, a, b) * m.F(e, x, c) + m.F(x, b, c) * m.F(e, x, a) + m.F(x, c, a) * m.F(e, x, b);
          jac = std::max(jac, magnitude(acc));
          jac_ok = jac_ok && small(acc, tol);
        }
  if (!anti_ok) out.push_back({ValidationKind::Shape, "structure constants not antisymmetric", anti});
  if (!real_ok) out.push_back({ValidationKind::Reality, "conjugate brackets are not conjugate", real});
  if (!integ_ok) out.push_back({ValidationKind::Integrability, "[e_i, e_j] has a (0,1) part", integ});
  if (!jac_ok) out.push_back({ValidationKind::Jacobi, "complexified Jacobi identity fails, residual " + fmt(jac), jac});
  return out;
}

HermitianModel<GaussRational> build_model(const StructureEquations& se) {
  auto fails = validate(se);
  if (!fails.empty()) throw ValidationError(std::move(fails));
  return raw_model(se);
}

HermitianModel<Complex> build_model(const RealLieData& rl) {
  auto fails = validate(rl);
  if (!fails.empty()) throw ValidationError(std::move(fails));
  const int d = rl.dim, n = d / 2;
  const auto h = [&](const std::vector<Complex>& u, const std::vector<Complex>& v) {
    Complex acc{};
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        acc += u[static_cast<std::size_t>(r)] * rl.g(r, c) * std::conj(v[static_cast<std::size_t>(c)]);
    return acc;
  };
  // Gram-Schmidt on x_m - i J x_m in the order m = 0, 1, ...
  std::vector<std::vector<Complex>> frame;
  for (int m = 0; m < d && static_cast<int>(frame.size()) < n; ++m) {
    std::vector<Complex> v(static_cast<std::size_t>(d));
    for (int r = 0; r < d; ++r) v[static_cast<std::size_t>(r)] = Complex((r == m ? 1.0 : 0.0), -rl.J(r, m));
    for (const auto& e : frame) {
      const Complex p = h(v, e);
      for (int r = 0; r < d; ++r) v[static_cast<std::size_t>(r)] -= p * e[static_cast<std::size_t>(r)];
    }
    const double norm = std::sqrt(h(v, v).real());
    if (norm < 1e-9) continue;
    for (auto& x : v) x /= norm;
    frame.push_back(std::move(v));
  }
  if (static_cast<int>(frame.size()) != n) throw std::runtime_error("could not extract a (1,0)-frame");
  Matrix<Complex> p(d, d);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < d; ++r) {
      p(r, i) = frame[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)];
      p(r, n + i) = std::conj(p(r, i));
    }
  const Matrix<Complex> pinv = inverse(p);
  HermitianModel<Complex> model(n);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::vector<Complex> br(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const Complex w = p(i, a) * p(j, b);
          if (w == Complex{}) continue;
          for (int k = 0; k < d; ++k) br[static_cast<std::size_t>(k)] += w * rl.bracket(k, i, j);
        }
      for (int c = 0; c < d; ++c) {
        Complex acc{};
        for (int k = 0; k < d; ++k) acc += pinv(c, k) * br[static_cast<std::size_t>(k)];
        model.F(c, a, b) = acc;
      }
    }
  auto mf = validate_model(model, 1e-10);
  if (!mf.empty()) throw ValidationError(std::move(mf));
  return model;
}

HermitianModel<Complex> to_complex(const HermitianModel<GaussRational>& m) {
  HermitianModel<Complex> out(m.n);
  for (std::size_t k = 0; k < m.f.size(); ++k) out.f[k] = to_complex(m.f[k]);
  return out;
}

template <class S>
HermitianModel<S> change_frame(const HermitianModel<S>& m, const Matrix<S>& u) {
  const int n = m.n, d = m.dirs();
  if (u.rows() != n || !is_unitary(u)) throw std::invalid_argument("frame change needs a unitary n x n matrix");
  Matrix<S> big(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      big(i, j) = u(i, j);
      big(n + i, n + j) = conj_of(u(i, j));
    }
  const Matrix<S> inv = big.adjoint();
  HermitianModel<S> out(n);
  // brackets of new frame vectors, expressed in the old frame, then mapped back
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      std::vector<S> old(static_cast<std::size_t>(d), ScalarTraits<S>::zero());
      for (int x = 0; x < d; ++x) {
        if (exactly_zero(big(x, a))) continue;
        for (int y = 0; y < d; ++y) {
          const S w = big(x, a) * big(y, b);
          if (exactly_zero(w)) continue;
          for (int z = 0; z < d; ++z) old[static_cast<std::size_t>(z)] += w * m.F(z, x, y);
        }
      }
      for (int c = 0; c < d; ++c) {
        S acc = ScalarTraits<S>::zero();
        for (int z = 0; z < d; ++z) acc += inv(c, z) * old[static_cast<std::size_t>(z)];
        out.F(c, a, b) = acc;
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Connections

template <class S>
Matrix<S> Connection<S>::full(int a) const {
  Matrix<S> out(2 * n, 2 * n);
  const Matrix<S>& h = M[static_cast<std::size_t>(a)];
  const Matrix<S>& o = M[static_cast<std::size_t>(bar(a, n))];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out(i, j) = h(i, j);
      out(n + i, n + j) = conj_of(o(i, j));
    }
  return out;
}

template <class S>
double Connection<S>::metric_residual() const {
  double r = 0.0;
  for (int a = 0; a < 2 * n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        r = std::max(r, magnitude(M[static_cast<std::size_t>(a)](k, j) +
                                  conj_of(M[static_cast<std::size_t>(bar(a, n))](j, k))));
  return r;
}

template <class S>
Connection<S> chern(const HermitianModel<S>& m) {
  const int n = m.n;
  Connection<S> c{n, std::vector<Matrix<S>>(static_cast<std::size_t>(2 * n), Matrix<S>(n, n))};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        c.M[static_cast<std::size_t>(n + i)](k, j) = m.F(k, n + i, j);
        c.M[static_cast<std::size_t>(i)](k, j) = -conj_of(m.F(j, n + i, k));
      }
  return c;
}

template <class S>
ChernTorsion<S> chern_torsion(const HermitianModel<S>& m) {
  const int n = m.n;
  const Connection<S> c = chern(m);
  ChernTorsion<S> out{FrameTensor<S>(n, {SlotKind::HolUp, SlotKind::HolDown, SlotKind::HolDown}),
                      FrameTensor<S>(n, {SlotKind::HolDown})};
  const S h = half<S>();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.T.at({k, i, j}) =
            h * (c.M[static_cast<std::size_t>(i)](k, j) - c.M[static_cast<std::size_t>(j)](k, i) - m.F(k, i, j));
  out.eta = contract(out.T, 0, 1);
  return out;
}

template <class S>
Connection<S> gauduchon_connection(const HermitianModel<S>& m, const S& s) {
  const int n = m.n;
  Connection<S> c = chern(m);
  const FrameTensor<S> t = chern_torsion(m).T;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        c.M[static_cast<std::size_t>(i)](k, j) -= s * t.at({k, i, j});
        c.M[static_cast<std::size_t>(n + i)](k, j) += s * conj_of(t.at({j, i, k}));
      }
  return c;
}

template <class S>
std::vector<S> torsion(const HermitianModel<S>& m, const Connection<S>& conn) {
  const int d = m.dirs();
  std::vector<Matrix<S>> g;
  for (int a = 0; a < d; ++a) g.push_back(conn.full(a));
  std::vector<S> out(m.f.size());
  for (int c = 0; c < d; ++c)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        out[m.at(c, a, b)] = g[static_cast<std::size_t>(a)](c, b) - g[static_cast<std::size_t>(b)](c, a) - m.F(c, a, b);
  return out;
}

template <class S>
double Curvature<S>::max_abs() const {
  double r = 0.0;
  for (const auto& x : R) r = std::max(r, x.max_abs());
  return r;
}

template <class S>
Curvature<S> curvature(const HermitianModel<S>& m, const Connection<S>& conn) {
  const int d = m.dirs();
  std::vector<Matrix<S>> g;
  for (int a = 0; a < d; ++a) g.push_back(conn.full(a));
  Curvature<S> out{m.n, {}};
  out.R.reserve(static_cast<std::size_t>(d * d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const auto& ga = g[static_cast<std::size_t>(a)];
      const auto& gb = g[static_cast<std::size_t>(b)];
      Matrix<S> r = ga * gb - gb * ga;
      for (int c = 0; c < d; ++c)
        if (!exactly_zero(m.F(c, a, b))) r -= m.F(c, a, b) * g[static_cast<std::size_t>(c)];
      out.R.push_back(std::move(r));
    }
  return out;
}

template <class S>
double general_bianchi_residual(const HermitianModel<S>& m, const Connection<S>& conn) {
  const int d = m.dirs();
  const auto tor = torsion(m, conn);
  const auto curv = curvature(m, conn);
  std::vector<Matrix<S>> g;
  for (int a = 0; a < d; ++a) g.push_back(conn.full(a));
  const auto T = [&](int c, int a, int b) -> const S& { return tor[m.at(c, a, b)]; };
  // (nabla_x Tor)(e; a, b)
  std::vector<S> dtor(static_cast<std::size_t>(d) * tor.size(), ScalarTraits<S>::zero());
  const auto DT = [&](int x, int e, int a, int b) -> S& { return dtor[static_cast<std::size_t>(x) * tor.size() + m.at(e, a, b)]; };
  for (int x = 0; x < d; ++x) {
    const auto& gx = g[static_cast<std::size_t>(x)];
    for (int e = 0; e < d; ++e)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          S acc = ScalarTraits<S>::zero();
          for (int y = 0; y < d; ++y)
            acc += gx(e, y) * T(y, a, b) - gx(y, a) * T(e, y, b) - gx(y, b) * T(e, a, y);
          DT(x, e, a, b) = acc;
        }
  }
  double res = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          S lhs = curv.at(a, b)(e, c) + curv.at(b, c)(e, a) + curv.at(c, a)(e, b);
          S rhs = DT(a, e, b, c) + DT(b, e, c, a) + DT(c, e, a, b);
          for (int y = 0; y < d; ++y) rhs += T(y, a, b) * T(e, y, c) + T(y, b, c) * T(e, y, a) + T(y, c, a) * T(e, y, b);
          res = std::max(res, magnitude(lhs - rhs));
        }
  return res;
}

template <class S>
KahlerLikeReport kahler_like_residual(const HermitianModel<S>& m, const S& s) {
  const int n = m.n, d = m.dirs();
  const auto curv = curvature(m, gauduchon_connection(m, s));
  KahlerLikeReport rep;
  rep.rho_flat = curv.max_abs();
  for (int a = 0; a < d; ++a)
    for (int b = a + 1; b < d; ++b)
      for (int c = b + 1; c < d; ++c)
        for (int e = 0; e < d; ++e)
          rep.rho_bianchi = std::max(rep.rho_bianchi,
                                     magnitude(curv.at(a, b)(e, c) + curv.at(b, c)(e, a) + curv.at(c, a)(e, b)));
  // J E_a = +-i E_a, so R(JE_a, JE_b) - R(E_a, E_b) is -2 R(E_a, E_b) when
  // both directions have the same type and 0 otherwise
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      if ((a < n) == (b < n)) rep.rho_type = std::max(rep.rho_type, 2.0 * curv.at(a, b).max_abs());
  return rep;
}

template <class S>
CheckReport gauduchon_torsion_checks(const HermitianModel<S>& m, const S& s, double tol) {
  const int n = m.n, d = m.dirs();
  const auto conn = gauduchon_connection(m, s);
  const auto tor = torsion(m, conn);
  const auto t = chern_torsion(m).T;
  const S zero = ScalarTraits<S>::zero();
  const S one = ScalarTraits<S>::one();
  CheckItem metric{"metric compatibility"}, type{"type preservation"}, t20{"(2,0) torsion"}, t11{"(1,1) torsion"},
      t02{"(0,2) torsion"}, bianchi{"general Bianchi identity"};
  metric.residual = conn.metric_residual();
  metric.pass = metric.residual <= tol && (!ScalarTraits<S>::exact || metric.residual == 0.0);
  for (int a = 0; a < d; ++a) {
    const auto g = conn.full(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        record(type, g(n + i, j), zero, tol);
        record(type, g(i, n + j), zero, tol);
      }
  }
  const S two_one_minus_s = S(2) * (one - s);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto where = tuple_str({k, i, j});
        record(t20, tor[m.at(k, i, j)], two_one_minus_s * t.at({k, i, j}), tol, where);
        record(t20, tor[m.at(n + k, i, j)], zero, tol, where);
        record(t11, tor[m.at(k, n + i, j)], s * conj_of(t.at({j, i, k})), tol, where);
        record(t11, tor[m.at(n + k, n + i, j)], -(s * t.at({i, j, k})), tol, where);
        record(t02, tor[m.at(k, n + i, n + j)], zero, tol, where);
      }
  bianchi.residual = general_bianchi_residual(m, conn);
  bianchi.pass = ScalarTraits<S>::exact ? bianchi.residual == 0.0 : bianchi.residual <= tol;
  return {{metric, type, t20, t11, t02, bianchi}};
}

// ---------------------------------------------------------------------------
// Covariant derivatives

template <class S>
FrameTensor<S> act(const FrameTensor<S>& t, const Matrix<S>& hol, const Matrix<S>& anti) {
  const int n = t.dim();
  FrameTensor<S> out(n, t.slots());
  std::vector<int> idx(static_cast<std::size_t>(t.rank()));
  for (std::size_t off = 0; off < t.data().size(); ++off) {
    const S& v = t.data()[off];
    if (exactly_zero(v)) continue;
    const std::vector<int> base = t.unflatten(off);
    for (int p = 0; p < t.rank(); ++p) {
      const SlotKind kind = t.slots()[static_cast<std::size_t>(p)];
      const Matrix<S>& m = is_anti(kind) ? anti : hol;
      idx = base;
      const int src = base[static_cast<std::size_t>(p)];
      for (int x = 0; x < n; ++x) {
        idx[static_cast<std::size_t>(p)] = x;
        // upper: out^x += m(x, src) t^src; lower: out_x -= m(src, x) t_src
        if (is_upper(kind)) out.at(std::span<const int>(idx)) += m(x, src) * v;
        else out.at(std::span<const int>(idx)) -= m(src, x) * v;
      }
    }
  }
  return out;
}

template <class S>
std::vector<FrameTensor<S>> covariant_derivative(const FrameTensor<S>& t, const Connection<S>& conn) {
  if (t.dim() != conn.n) throw std::invalid_argument("tensor and connection live on different frames");
  const int n = conn.n;
  std::vector<FrameTensor<S>> out;
  for (int a = 0; a < 2 * n; ++a)
    out.push_back(act(t, conn.M[static_cast<std::size_t>(a)], conn.M[static_cast<std::size_t>(bar(a, n))].conjugate()));
  return out;
}

template <class S>
std::vector<std::vector<FrameTensor<S>>> second_covariant_derivative(const FrameTensor<S>& t,
                                                                     const Connection<S>& conn) {
  const int d = 2 * conn.n;
  const auto first = covariant_derivative(t, conn);
  std::vector<Matrix<S>> g;
  for (int a = 0; a < d; ++a) g.push_back(conn.full(a));
  std::vector<std::vector<FrameTensor<S>>> out(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const auto along = covariant_derivative(first[static_cast<std::size_t>(a)], conn);
    for (int b = 0; b < d; ++b) {
      FrameTensor<S> v = along[static_cast<std::size_t>(b)];
      for (int c = 0; c < d; ++c) {
        const S& w = g[static_cast<std::size_t>(b)](c, a);
        if (exactly_zero(w)) continue;
        FrameTensor<S> term = first[static_cast<std::size_t>(c)];
        term *= w;
        v -= term;
      }
      out[static_cast<std::size_t>(a)].push_back(std::move(v));
    }
  }
  return out;
}

template <class S>
double commutation_residual(const HermitianModel<S>& m, const Connection<S>& conn, const FrameTensor<S>& t) {
  const int n = m.n, d = m.dirs();
  const auto first = covariant_derivative(t, conn);
  const auto second = second_covariant_derivative(t, conn);
  const auto tor = torsion(m, conn);
  const auto curv = curvature(m, conn);
  double res = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const auto& r = curv.at(a, b);
      Matrix<S> hol(n, n), anti(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          hol(i, j) = r(i, j);
          anti(i, j) = r(n + i, n + j);
        }
      FrameTensor<S> diff = second[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] -
                            second[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] - act(t, hol, anti);
      for (int c = 0; c < d; ++c) {
        const S& w = tor[m.at(c, a, b)];
        if (exactly_zero(w)) continue;
        FrameTensor<S> term = first[static_cast<std::size_t>(c)];
        term *= w;
        diff += term;
      }
      res = std::max(res, diff.max_abs());
    }
  return res;
}

// ---------------------------------------------------------------------------
// Ricci and the exterior algebra

template <class S>
Matrix<S> ricci_first(const HermitianModel<S>& m, const S& s) {
  const int n = m.n, d = m.dirs();
  const auto curv = curvature(m, gauduchon_connection(m, s));
  Matrix<S> ric(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int i = 0; i < n; ++i) ric(a, b) += curv.at(a, b)(i, i);
  return ric;
}

namespace {

// Forms on the complexified coframe E^0..E^{2n-1}; monomials are bitmasks
// with generators in increasing order.
template <class S>
using Form = std::map<unsigned, S>;

// Sign of reordering mono(a) ^ mono(b) into increasing order, 0 on overlap.
int wedge_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  int swaps = 0;
  for (unsigned bb = b; bb; bb &= bb - 1) {
    const unsigned low = bb & (~bb + 1);
    // generators of a above this generator of b must pass it
    swaps += std::popcount(a & ~((low << 1) - 1));
  }
  return swaps % 2 ? -1 : 1;
}

template <class S>
void add_term(Form<S>& f, unsigned mono, const S& v) {
  if (exactly_zero(v)) return;
  auto [it, fresh] = f.try_emplace(mono, v);
  if (!fresh) {
    it->second += v;
    if (exactly_zero(it->second)) f.erase(it);
  }
}

template <class S>
Form<S> wedge(const Form<S>& x, const Form<S>& y) {
  Form<S> out;
  for (const auto& [mx, vx] : x)
    for (const auto& [my, vy] : y) {
      const int sg = wedge_sign(mx, my);
      if (sg == 0) continue;
      add_term(out, mx | my, sg > 0 ? vx * vy : -(vx * vy));
    }
  return out;
}

template <class S>
Form<S> d_generator(const HermitianModel<S>& m, int c) {
  Form<S> out;
  for (int a = 0; a < m.dirs(); ++a)
    for (int b = a + 1; b < m.dirs(); ++b) add_term(out, (1u << a) | (1u << b), -m.F(c, a, b));
  return out;
}

template <class S>
Form<S> d(const HermitianModel<S>& m, const Form<S>& f) {
  std::vector<Form<S>> dgen;
  for (int c = 0; c < m.dirs(); ++c) dgen.push_back(d_generator(m, c));
  Form<S> out;
  for (const auto& [mono, v] : f) {
    int pos = 0;
    for (int c = 0; c < m.dirs(); ++c) {
      if (!(mono & (1u << c))) continue;
      const unsigned below = mono & ((1u << c) - 1);
      const unsigned above = mono & ~((1u << (c + 1)) - 1);
      const Form<S> left{{below, pos % 2 ? -v : v}};
      const Form<S> right{{above, ScalarTraits<S>::one()}};
      for (const auto& [mm, vv] : wedge(wedge(left, dgen[static_cast<std::size_t>(c)]), right)) add_term(out, mm, vv);
      ++pos;
    }
  }
  return out;
}

template <class S>
Form<S> omega(const HermitianModel<S>& m) {
  Form<S> out;
  for (int k = 0; k < m.n; ++k) add_term(out, (1u << k) | (1u << (m.n + k)), ScalarTraits<S>::imag_unit());
  return out;
}

}  // namespace

template <class S>
double d_omega_norm(const HermitianModel<S>& m) {
  double r = 0.0;
  for (const auto& [mono, v] : d(m, omega(m))) r = std::max(r, magnitude(v));
  return r;
}

template <class S>
bool is_kahler(const HermitianModel<S>& m, double tol) {
  const double r = d_omega_norm(m);
  return ScalarTraits<S>::exact ? r == 0.0 : r <= tol;
}

template <class S>
LeeForm<S> lee_form(const HermitianModel<S>& m) {
  const int n = m.n, dd = m.dirs();
  Form<S> power{{0u, ScalarTraits<S>::one()}};
  const Form<S> w = omega(m);
  for (int p = 0; p < n - 1; ++p) power = wedge(power, w);
  const Form<S> rhs_form = d(m, power);
  const unsigned all = (1u << dd) - 1;
  // rows: the 2n monomials of degree 2n-1, indexed by the missing generator
  Matrix<S> lhs(dd, dd), rhs(dd, 1);
  for (int a = 0; a < dd; ++a) {
    const Form<S> ea{{1u << a, ScalarTraits<S>::one()}};
    for (const auto& [mono, v] : wedge(ea, power)) {
      const int missing = std::countr_zero(all & ~mono);
      lhs(missing, a) = v;
    }
  }
  for (const auto& [mono, v] : rhs_form) rhs(std::countr_zero(all & ~mono), 0) = v;
  const Matrix<S> x = solve(lhs, rhs);
  LeeForm<S> out;
  for (int a = 0; a < dd; ++a) out.theta.push_back(x(a, 0));
  out.residual = (lhs * x - rhs).max_abs();
  return out;
}

// ---------------------------------------------------------------------------

template <class S>
DerivativeTable<S> genuine_table(const HermitianModel<S>& m, const S& s) {
  const int n = m.n, d = m.dirs();
  const FrameTensor<S> t = chern_torsion(m).T;
  const auto conn = gauduchon_connection(m, s);
  const auto first = covariant_derivative(t, conn);
  const auto second = second_covariant_derivative(t, conn);
  const S c = eval_poly(abc().c, s);
  std::vector<S> tv(t.data().begin(), t.data().end());
  DerivativeTable<S> tab(n, s, c, tv);
  const S c2 = c * c;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int a = 0; a < d; ++a) {
          tab.d1(k, i, j, a) = c * first[static_cast<std::size_t>(a)].at({k, i, j});
          for (int b = 0; b < d; ++b)
            tab.set_d2(k, i, j, a, b, c2 * second[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].at({k, i, j}));
        }
  return tab;
}

#define GAUDUCHON_INSTANTIATE(S)                                                                                   \
  template std::vector<ValidationFailure> validate_model(const HermitianModel<S>&, double);                        \
  template HermitianModel<S> change_frame(const HermitianModel<S>&, const Matrix<S>&);                            \
  template struct Connection<S>;                                                                                   \
  template struct Curvature<S>;                                                                                    \
  template Connection<S> chern(const HermitianModel<S>&);                                                          \
  template ChernTorsion<S> chern_torsion(const HermitianModel<S>&);                                                \
  template Connection<S> gauduchon_connection(const HermitianModel<S>&, const S&);                                            \
  template std::vector<S> torsion(const HermitianModel<S>&, const Connection<S>&);                                 \
  template Curvature<S> curvature(const HermitianModel<S>&, const Connection<S>&);                                 \
  template double general_bianchi_residual(const HermitianModel<S>&, const Connection<S>&);                        \
  template KahlerLikeReport kahler_like_residual(const HermitianModel<S>&, const S&);                              \
  template CheckReport gauduchon_torsion_checks(const HermitianModel<S>&, const S&, double);                       \
  template FrameTensor<S> act(const FrameTensor<S>&, const Matrix<S>&, const Matrix<S>&);                          \
  template std::vector<FrameTensor<S>> covariant_derivative(const FrameTensor<S>&, const Connection<S>&);          \
  template std::vector<std::vector<FrameTensor<S>>> second_covariant_derivative(const FrameTensor<S>&,             \
                                                                                const Connection<S>&);             \
  template double commutation_residual(const HermitianModel<S>&, const Connection<S>&, const FrameTensor<S>&);     \
  template Matrix<S> ricci_first(const HermitianModel<S>&, const S&);                                              \
  template LeeForm<S> lee_form(const HermitianModel<S>&);                                                          \
  template double d_omega_norm(const HermitianModel<S>&);                                                          \
  template bool is_kahler(const HermitianModel<S>&, double);                                                       \
  template DerivativeTable<S> genuine_table(const HermitianModel<S>&, const S&);

GAUDUCHON_INSTANTIATE(GaussRational)
GAUDUCHON_INSTANTIATE(Complex)

}  // namespace gauduchon
