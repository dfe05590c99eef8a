// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gauduchon/formal_calculus.hpp"
#include "gauduchon/reports.hpp"

using namespace gauduchon;

namespace {

const std::string kFixtures = GAUDUCHON_FIXTURE_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::vector<Rational> kGrid = {Rational(-1),   Rational(0), Rational(1, 3), Rational(1, 2),
                                     Rational(2, 3), Rational(4, 5), Rational(1), Rational(3, 2),
                                     Rational(2),    Rational(5, 2), Rational(3), Rational(4)};

HermitianModel<GaussRational> exact_fixture(const std::string& f) {
  return build_model(std::get<StructureEquations>(load_model(kFixtures + "/" + f).input));
}

HermitianModel<Complex> float_fixture(const std::string& f) {
  return build_model(std::get<RealLieData>(load_model(kFixtures + "/" + f).input));
}

bool check_passes(const std::vector<SystemCheck>& checks, const std::string& name) {
  for (const auto& c : checks)
    if (c.name == name) return c.pass;
  return false;
}

Outcome determinant_reproduction() {
  const RationalPoly det = determinant();
  const bool eq = det == factored_determinant();
  return {eq, "degree " + std::to_string(det.degree()) + ", " + (eq ? "equal" : "NOT equal") +
                  " to 64 s^8 (s-2)^3 (s-1)^3 (2s-1)^3 (3s-2)^2 (5s-4) coefficientwise"};
}

Outcome singular_set_and_ranks() {
  const auto checks = verify_system();
  const bool ok = check_passes(checks, "singular set") && check_passes(checks, "reduced rank at 2/3") &&
                  check_passes(checks, "reduced rank at 4/5");
  std::string d;
  for (const auto& c : checks)
    if (c.name != "coefficient identities" && c.name != "determinant factorisation") d += c.detail + "; ";
  return {ok, d.substr(0, d.size() - 2)};
}

Outcome coefficient_identity() {
  const auto ids = coefficient_identities();
  int bad = 0;
  for (const auto& i : ids) bad += i.pass ? 0 : 1;
  return {bad == 0 && !ids.empty(), std::to_string(ids.size() - bad) + "/" + std::to_string(ids.size()) + " exact"};
}

Outcome formal_lemma_suite() {
  int total = 0;
  std::string d;
  bool ok = true;
  for (int n : {2, 3, 4}) {
    const auto sum = verify_lemmas(n, 100, 20261016 + n);
    total += sum.draws;
    ok = ok && sum.all_pass() && sum.rows.size() == 20;
    d += "n=" + std::to_string(n) + " " + (sum.all_pass() ? "ok" : "FAIL " + sum.counterexample) + ", ";
  }
  return {ok, d + std::to_string(total) + " draws x 20 items, symbolic s"};
}

Outcome fixture_flatness() {
  const auto iw = exact_fixture("iwasawa.json");
  const double r0 = curvature(iw, chern(iw)).max_abs();
  const auto ct = chern_torsion(iw);
  const bool t312 = ct.T.at({2, 0, 1}) == GaussRational(Rational(1, 2));
  const bool eta0 = ct.eta.is_exactly_zero();

  const auto h = float_fixture("hopf.json");
  const auto conn = gauduchon_connection(h, Complex(2.0));
  const double r2 = curvature(h, conn).max_abs();
  const auto tor = torsion(h, conn);
  // g(Tor(E_a, E_b), E_c) sits in the E_cbar slot; total skewness means
  // antisymmetry in (b, c) on top of (a, b)
  const int n = h.n;
  double skew = 0.0, size = 0.0;
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b)
      for (int c = 0; c < 2 * n; ++c) {
        const int cb = c < n ? c + n : c - n, bb = b < n ? b + n : b - n;
        skew = std::max(skew, std::abs(tor[h.at(cb, a, b)] + tor[h.at(bb, a, c)]));
        size = std::max(size, std::abs(tor[h.at(cb, a, b)]));
      }
  const bool ok = r0 <= 1e-10 && t312 && eta0 && r2 <= 1e-10 && skew <= 1e-10 && size > 0.1;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "iwasawa |R^0| = %.3g, T^3_12 = 1/2: %s, eta = 0: %s; hopf |R^2| = %.3g, skew defect %.3g, |T^2| max %.3g",
                r0, t312 ? "yes" : "no", eta0 ? "yes" : "no", r2, skew, size);
  return {ok, buf};
}

Outcome consistency_sweep() {
  int rows = 0, violations = 0;
  bool torus_ok = true;
  for (const auto& e : catalog()) {
    const auto doc = build_report(load_model(kFixtures + "/" + e.file), kGrid, 1e-9);
    rows += static_cast<int>(doc.rows.size());
    if (doc.verdict != "CONSISTENT") ++violations;
    if (e.file.rfind("torus", 0) == 0)
      for (const auto& r : doc.rows) torus_ok = torus_ok && r.kahler_like;
    // the verdict is derived, so recheck it row by row
    if (!doc.kahler)
      for (std::size_t k = 0; k < doc.rows.size(); ++k) {
        const bool exempt = kGrid[k] == 0 || kGrid[k] == 2;
        if (!exempt && doc.rows[k].kahler_like) ++violations;
      }
  }
  return {violations == 0 && torus_ok,
          std::to_string(catalog().size()) + " models x 12 values of s = " + std::to_string(rows) + " rows, " +
              std::to_string(violations) + " violations, torus Kahler-like everywhere: " + (torus_ok ? "yes" : "no")};
}

Outcome balanced_ricci() {
  const auto iw = exact_fixture("iwasawa.json");
  double worst = 0.0;
  for (const auto& s : kGrid) worst = std::max(worst, ricci_first(iw, GaussRational(s)).max_abs());
  char buf[128];
  std::snprintf(buf, sizeof buf, "iwasawa max |Ric^(1)(s)| over the grid = %.3g", worst);
  return {worst <= 1e-10, buf};
}

Outcome genuine_structural_identities() {
  const auto h = float_fixture("hopf.json");
  const Complex s(2.0);
  const auto tab = genuine_table(h, s);
  const CheckContext<Complex> cx(tab, standard_claims(), 1e-10);
  CheckReport rep = torsion_identity_checks(cx);
  rep.append(eta_identity_checks(cx));
  int bad = 0;
  for (const auto& i : rep.items) bad += i.pass ? 0 : 1;
  double rows = 0.0;
  for (const auto& v : row_forms(cx, standard_claims())) rows = std::max(rows, std::abs(v));
  for (const auto& v : row_expressions(cx)) rows = std::max(rows, std::abs(v));
  const auto conn = gauduchon_connection(h, s);
  const double comm = std::max(commutation_residual(h, conn, chern_torsion(h).T),
                               commutation_residual(h, conn, chern_torsion(h).eta));
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d/%zu identities, system rows max %.3g, commutation residual %.3g (hopf, s = 2)",
                static_cast<int>(rep.items.size()) - bad, rep.items.size(), rows, comm);
  return {bad == 0 && rows <= 1e-10 && comm <= 1e-10, buf};
}

Outcome mutation_sensitivity() {
  std::vector<std::string> tampers{"a", "b", "c"};
  const PolyMatrix m = system_matrix();
  int zero_entries = 0;
  for (int r = 1; r <= 4; ++r)
    for (int c = 1; c <= 4; ++c) {
      if (m(r - 1, c - 1).is_zero()) {
        ++zero_entries;
        continue;
      }
      tampers.push_back("entry:" + std::to_string(r) + "," + std::to_string(c));
    }
  int caught = 0;
  std::string missed;
  for (const auto& t : tampers) {
    const Claims cl = claims_from_tamper(t);
    bool detected = false;
    for (const auto& c : verify_system(cl)) detected = detected || !c.pass;
    if (!verify_lemmas(2, 1, 0, cl).all_pass()) detected = true;
    if (detected) ++caught;
    else missed += " " + t;
  }
  return {caught == static_cast<int>(tampers.size()),
          std::to_string(caught) + "/" + std::to_string(tampers.size()) + " mutations caught (a, b, c and every nonzero entry; " +
              std::to_string(zero_entries) + " zero entries are sign-invariant)" + (missed.empty() ? "" : "; missed:" + missed)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "determinant reproduction", 1, determinant_reproduction},
      {2, "singular set and reduced ranks", 1, singular_set_and_ranks},
      {3, "coefficient identities", 1, coefficient_identity},
      {4, "formal lemma suite", 120, formal_lemma_suite},
      {5, "fixture flatness", 10, fixture_flatness},
      {6, "consistency sweep", 30, consistency_sweep},
      {7, "balanced Ricci claim", 10, balanced_ricci},
      {8, "structural identities on Kahler-like data", 10, genuine_structural_identities},
      {9, "mutation sensitivity", 120, mutation_sensitivity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("criterion %d %s  %s: %s (%.2f s of %.0f s)%s\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                secs, c.budget_s, in_time ? "" : " OVER BUDGET");
    std::fflush(stdout);
  }
  return failures;
}
