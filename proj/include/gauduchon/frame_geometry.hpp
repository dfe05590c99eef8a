#pragma once

// Left-invariant Hermitian structures in a unitary (1,0)-frame.
//
// Complexified frame index a = 0..2n-1: E_a = e_a for a < n, E_a = ebar_{a-n}
// otherwise. A model stores all structure constants [E_a, E_b] = f^c_ab E_c.
//
// Conventions:
//   d alpha(X, Y) = X alpha(Y) - Y alpha(X) - alpha([X, Y]), wedge without 1/2,
//   so for left-invariant forms phi^k([X, Y]) = -d phi^k(X, Y).
//   A connection stores M_a with nabla_{E_a} e_j = sum_k M_a(k, j) e_k; the
//   antiholomorphic frame is moved by conj(M_{abar}).
//   omega = g(J., .) = i sum_k phi^k ^ phibar^k.

#include <stdexcept>
#include <string>
#include <vector>

#include "gauduchon/checks.hpp"
#include "gauduchon/formal_calculus.hpp"
#include "gauduchon/frame_tensor.hpp"
#include "gauduchon/matrix.hpp"
#include "gauduchon/numeric.hpp"

namespace gauduchon {

// ---------------------------------------------------------------------------
// Inputs and validation

enum class ValidationKind { Shape, DSquared, Jacobi, JSquared, Nijenhuis, MetricCompat, Integrability, Reality };
std::string to_string(ValidationKind k);

struct ValidationFailure {
  ValidationKind kind;
  std::string message;
  double residual = 0.0;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<ValidationFailure> failures);
  const std::vector<ValidationFailure>& failures() const { return failures_; }

 private:
  std::vector<ValidationFailure> failures_;
};

/// d phi^k = sum_{i<j} A^k_ij phi^i ^ phi^j + sum_{i,j} B^k_ij phi^i ^ phibar^j.
/// A is stored in full and kept antisymmetric; there is no (0,2) slot.
struct StructureEquations {
  int n = 0;
  std::vector<GaussRational> A;  // (k, i, j) -> idx3
  std::vector<GaussRational> B;

  explicit StructureEquations(int dim);
  /// Adds c phi^i ^ phi^j (keeps A antisymmetric; i == j contributes nothing).
  void add_20(int k, int i, int j, const GaussRational& c);
  /// Adds c phi^i ^ phibar^j.
  void add_11(int k, int i, int j, const GaussRational& c);
  const GaussRational& a(int k, int i, int j) const { return A[idx3(n, k, i, j)]; }
  const GaussRational& b(int k, int i, int j) const { return B[idx3(n, k, i, j)]; }
};

/// Real Lie algebra with [x_i, x_j] = sum_k f(k, i, j) x_k, J acting on
/// columns (J x_m = sum_r J(r, m) x_r) and metric g(x_r, x_m) = g(r, m).
struct RealLieData {
  int dim = 0;
  std::vector<double> f;  // (k, i, j) -> (k * dim + i) * dim + j
  Matrix<double> J, g;

  explicit RealLieData(int d);
  double& bracket(int k, int i, int j) { return f[static_cast<std::size_t>((k * dim + i) * dim + j)]; }
  double bracket(int k, int i, int j) const { return f[static_cast<std::size_t>((k * dim + i) * dim + j)]; }
  /// Sets [x_i, x_j] = v and [x_j, x_i] = -v in the x_k direction.
  void set_bracket(int k, int i, int j, double v);
};

std::vector<ValidationFailure> validate(const StructureEquations& se);
std::vector<ValidationFailure> validate(const RealLieData& rl, double tol = 1e-10);

template <class S>
struct HermitianModel {
  int n = 0;
  std::vector<S> f;  // (c, a, b) over 2n directions

  HermitianModel() = default;
  explicit HermitianModel(int dim)
      : n(dim), f(static_cast<std::size_t>(8 * dim * dim * dim), ScalarTraits<S>::zero()) {}
  int dirs() const { return 2 * n; }
  std::size_t at(int c, int a, int b) const {
    const std::size_t m = static_cast<std::size_t>(2 * n);
    return (static_cast<std::size_t>(c) * m + static_cast<std::size_t>(a)) * m + static_cast<std::size_t>(b);
  }
  const S& F(int c, int a, int b) const { return f[at(c, a, b)]; }
  S& F(int c, int a, int b) { return f[at(c, a, b)]; }
  /// phi^k([e_i, e_j]) and phi^k([e_i, ebar_j]).
  const S& C(int k, int i, int j) const { return F(k, i, j); }
  const S& D(int k, int i, int j) const { return F(k, i, n + j); }
};

/// Complexified Jacobi, integrability, reality of the structure constants.
template <class S>
std::vector<ValidationFailure> validate_model(const HermitianModel<S>& m, double tol = 1e-10);

HermitianModel<GaussRational> build_model(const StructureEquations& se);
HermitianModel<Complex> build_model(const RealLieData& rl);
HermitianModel<Complex> to_complex(const HermitianModel<GaussRational>& m);

/// Same structure in the frame e'_i = sum_j u(j, i) e_j (u unitary).
template <class S>
HermitianModel<S> change_frame(const HermitianModel<S>& m, const Matrix<S>& u);

// ---------------------------------------------------------------------------
// Connections, torsion, curvature

template <class S>
struct Connection {
  int n = 0;
  std::vector<Matrix<S>> M;  // 2n matrices, n x n

  /// Action of nabla_{E_a} on the full complexified frame (block diagonal).
  Matrix<S> full(int a) const;
  /// g(nabla e_j, ebar_k) + g(e_j, nabla ebar_k) over all directions.
  double metric_residual() const;
};

template <class S>
Connection<S> chern(const HermitianModel<S>& m);

template <class S>
struct ChernTorsion {
  FrameTensor<S> T;    // (HolUp, HolDown, HolDown)
  FrameTensor<S> eta;  // (HolDown)
};

template <class S>
ChernTorsion<S> chern_torsion(const HermitianModel<S>& m);

template <class S>
Connection<S> gauduchon_connection(const HermitianModel<S>& m, const S& s);

/// Tor(c; a, b): E_c coefficient of nabla_a E_b - nabla_b E_a - [E_a, E_b].
template <class S>
std::vector<S> torsion(const HermitianModel<S>& m, const Connection<S>& conn);

template <class S>
struct Curvature {
  int n = 0;
  std::vector<Matrix<S>> R;  // (2n)^2 endomorphisms of the complexified frame
  const Matrix<S>& at(int a, int b) const { return R[static_cast<std::size_t>(a * 2 * n + b)]; }
  double max_abs() const;
};

template <class S>
Curvature<S> curvature(const HermitianModel<S>& m, const Connection<S>& conn);

/// max |sum_cyc R(X,Y)Z - sum_cyc (Tor(Tor(X,Y),Z) + (nabla_X Tor)(Y,Z))|.
template <class S>
double general_bianchi_residual(const HermitianModel<S>& m, const Connection<S>& conn);

struct KahlerLikeReport {
  double rho_bianchi = 0.0;
  double rho_type = 0.0;
  double rho_flat = 0.0;
};

template <class S>
KahlerLikeReport kahler_like_residual(const HermitianModel<S>& m, const S& s);

/// Connection invariants and the torsion formulas of the Gauduchon line at s.
template <class S>
CheckReport gauduchon_torsion_checks(const HermitianModel<S>& m, const S& s, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Covariant derivatives of left-invariant tensors

/// Derivation action of an endomorphism pair (hol block, anti block) on t.
template <class S>
FrameTensor<S> act(const FrameTensor<S>& t, const Matrix<S>& hol, const Matrix<S>& anti);

/// Entry a is nabla_{E_a} t.
template <class S>
std::vector<FrameTensor<S>> covariant_derivative(const FrameTensor<S>& t, const Connection<S>& conn);

/// Entry [a][b] is t_{,ab}: differentiate along E_a, then along E_b.
template <class S>
std::vector<std::vector<FrameTensor<S>>> second_covariant_derivative(const FrameTensor<S>& t,
                                                                     const Connection<S>& conn);

/// max over a, b of |t_{,ba} - t_{,ab} - R(a,b).t + nabla_{Tor(a,b)} t|.
template <class S>
double commutation_residual(const HermitianModel<S>& m, const Connection<S>& conn, const FrameTensor<S>& t);

// ---------------------------------------------------------------------------
// Ricci, Lee form

/// Ric(a, b) = sum_i g(R(E_a, E_b) e_i, ebar_i), 2n x 2n.
template <class S>
Matrix<S> ricci_first(const HermitianModel<S>& m, const S& s);

template <class S>
struct LeeForm {
  std::vector<S> theta;  // theta(E_a)
  double residual = 0.0;  // of theta ^ omega^{n-1} - d omega^{n-1}
};

template <class S>
LeeForm<S> lee_form(const HermitianModel<S>& m);

/// max |d omega|.
template <class S>
double d_omega_norm(const HermitianModel<S>& m);

template <class S>
bool is_kahler(const HermitianModel<S>& m, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Bridge to the formal checks

/// Table of genuine derivatives of the Chern torsion along nabla^s, scaled
/// like the substitution tables (c T_{,d}, c^2 T_{,ab}); every direction pair
/// is filled.
template <class S>
DerivativeTable<S> genuine_table(const HermitianModel<S>& m, const S& s);

}  // namespace gauduchon
