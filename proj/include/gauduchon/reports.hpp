#pragma once

// Model files, report documents and the command implementations behind the
// CLI. Commands write to a stream and return the process exit code.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "gauduchon/frame_geometry.hpp"
#include "gauduchon/polynomials.hpp"

namespace gauduchon {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitVerification = 2, kExitIo = 3 };

/// Malformed input; the message carries the file and field (or line) context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelFile {
  std::string name;
  std::string hash;  // FNV-1a 64 of the compact JSON dump, hex
  std::variant<StructureEquations, RealLieData> input;

  bool exact() const { return std::holds_alternative<StructureEquations>(input); }
  int complex_dim() const;
};

std::uint64_t fnv1a64(std::string_view bytes);

/// Parses a ModelFile document. Shape problems throw ParseError; a (0,2) term
/// in a structure equation throws ValidationError (integrability).
ModelFile parse_model(const std::string& text, const std::string& origin = "<input>");
ModelFile load_model(const std::string& path);

std::vector<ValidationFailure> validate(const ModelFile& mf);

/// "0,1/2,-3" -> rationals; throws ParseError.
std::vector<Rational> parse_s_list(const std::string& text);

/// Name of the classical connection at s, or "" (Chern, conformal, minimal
/// torsion, Lichnerowicz, Bismut).
std::string special_label(const Rational& s);

/// Residuals as decimal strings: "%.15g", with exact zero printed as "0".
std::string decimal(double x);

struct ReportRow {
  std::string s;
  std::string label;
  std::string rho_bianchi, rho_type, rho_flat, ricci;
  bool flat = false;
  bool kahler_like = false;
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReportDocument {
  std::string model;
  std::string hash;
  std::string backend;  // "exact" or "float"
  std::string tol;
  std::string norm_T, norm_eta;
  bool balanced = false;
  bool kahler = false;
  std::vector<ReportRow> rows;
  std::string verdict;  // CONSISTENT or VIOLATION
  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

ReportDocument build_report(const ModelFile& mf, const std::vector<Rational>& s_list, double tol = 1e-9);
nlohmann::json to_json(const ReportDocument& doc);
ReportDocument report_from_json(const nlohmann::json& j);
std::string render_text(const ReportDocument& doc);

// ---------------------------------------------------------------------------
// Verification runs

struct LemmaRow {
  std::string name;
  int passed = 0;
  int failed = 0;
  int first_failing_draw = -1;
  std::string detail;
};

struct LemmaSummary {
  int n = 0;
  int draws = 0;
  std::uint64_t seed = 0;
  std::vector<LemmaRow> rows;
  /// LCK parameters of the first failing draw, if any.
  std::string counterexample;
  bool all_pass() const;
};

/// Draws LCK parameters from the seed and runs the formal suite with symbolic s.
LemmaSummary verify_lemmas(int n, int draws, std::uint64_t seed, const Claims& claims = standard_claims());

struct SystemCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Coefficient identities, determinant factorisation, singular set, reduced
/// rank at 2/3 and at 4/5.
std::vector<SystemCheck> verify_system(const Claims& claims = standard_claims());

struct CatalogEntry {
  std::string file;
  std::string title;
  std::string expected;  // headline invariants, human readable
  bool kahler = false;
  bool balanced = false;
  std::vector<Rational> flat_at;  // parameters where R^s must vanish
};

const std::vector<CatalogEntry>& catalog();

/// Compares one fixture against its catalog expectations; returns mismatches.
std::vector<std::string> check_catalog_entry(const CatalogEntry& e, const std::string& fixture_dir, double tol = 1e-9);

/// Parses the tamper hook: "a", "b", "c" or "entry:ROW,COL" (1-based).
Claims claims_from_tamper(const std::string& spec);

int cmd_validate(const std::string& path, std::ostream& out);
int cmd_report(const std::string& path, const std::string& s_list, const std::string& format, double tol,
               std::ostream& out);
int cmd_verify_lemmas(int n, int draws, std::uint64_t seed, const Claims& claims, std::ostream& out);
int cmd_verify_system(const Claims& claims, std::ostream& out);
int cmd_catalog(const std::string& fixture_dir, std::ostream& out);

}  // namespace gauduchon
