#pragma once

// The coefficient functions a(s), b(s), c(s), the 4x4 linear system in the
// unknowns (A, B, C, <d|eta|^2, eta-bar>), its determinant, singular set and
// the rank analysis at the exceptional parameters.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gauduchon/matrix.hpp"
#include "gauduchon/polynomial.hpp"

namespace gauduchon {

/// The coefficient polynomials as claimed by the closed forms. A mutation may
/// flip the sign of one of them, or of one system-matrix entry (1-based row,
/// column), to check that the verification suites notice.
struct Claims {
  RationalPoly a;
  RationalPoly b;
  RationalPoly c;
  std::optional<std::pair<int, int>> flipped_entry;
};

Claims standard_claims();

/// Standard claims with one sign flipped: kind is 'a', 'b' or 'c'.
Claims tampered_claims(char kind);

/// Standard claims with the sign of system-matrix entry (row, col) flipped.
Claims tampered_entry(int row, int col);

/// a = -4s(s-1)^2, b = -s(5s^2-10s+4), c = 4(s-1)(2s-1), always the true ones.
struct Abc {
  RationalPoly a, b, c;
};
Abc abc();

RationalPoly s_power(int k);

/// Rows: entries x_i, y_i, z_i built from the a/b/c combinations.
struct RowCoefficients {
  std::array<RationalPoly, 3> x, y, z;
};
RowCoefficients row_coefficients(const Claims& claims = standard_claims());

using PolyMatrix = Matrix<RationalPoly>;

/// Columns (A, B, C, <d|eta|^2, eta-bar>).
PolyMatrix system_matrix(const Claims& claims = standard_claims());

struct PolyCheck {
  std::string name;
  bool pass = false;
  RationalPoly difference;
};

/// 7s^2-12s+4 identity and every stored entry against its frozen expansion.
std::vector<PolyCheck> coefficient_identities(const Claims& claims = standard_claims());

RationalPoly determinant_cofactor(const PolyMatrix& m);
RationalPoly determinant_bareiss(PolyMatrix m);

/// Cofactor determinant after checking that the Bareiss one agrees.
RationalPoly determinant(const Claims& claims = standard_claims());

/// 64 s^8 (s-2)^3 (s-1)^3 (2s-1)^3 (3s-2)^2 (5s-4), expanded.
RationalPoly factored_determinant();

struct Root {
  Rational value;
  int multiplicity = 0;
  friend bool operator==(const Root&, const Root&) = default;
};

/// Rational roots with multiplicities, ascending. Throws std::runtime_error if
/// a nonconstant factor without rational roots is left over.
std::vector<Root> rational_roots(const RationalPoly& p);

std::vector<Root> singular_set(const Claims& claims = standard_claims());

struct ReducedRank {
  int rank = 0;
  /// Each row of the 4x3 gradient-dropped matrix at s0 scaled to a primitive
  /// integer vector with first nonzero entry positive (zero rows stay zero).
  std::vector<std::array<mpz_class, 3>> rows;
};
ReducedRank reduced_rank(const Rational& s0, const Claims& claims = standard_claims());

Matrix<Rational> evaluate(const PolyMatrix& m, const Rational& s0);

/// True iff the 4x4 system at s0 is nonsingular.
bool conclude_C_zero(const Rational& s0, const Claims& claims = standard_claims());

}  // namespace gauduchon
