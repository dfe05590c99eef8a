#include "gauduchon/reports.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "gauduchon/formal_calculus.hpp"
#include "gauduchon/sampling.hpp"

namespace gauduchon {

using nlohmann::json;

int ModelFile::complex_dim() const {
  if (const auto* se = std::get_if<StructureEquations>(&input)) return se->n;
  return std::get<RealLieData>(input).dim / 2;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Model files

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& field, const std::string& what) {
  throw ParseError(origin + ": " + field + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& origin, const std::string& field) {
  if (!j.is_object() || !j.contains(key)) fail(origin, field, std::string("missing field '") + key + "'");
  return j.at(key);
}

int int_at(const json& j, const std::string& origin, const std::string& field) {
  if (!j.is_number_integer()) fail(origin, field, "expected an integer");
  return j.get<int>();
}

Rational rational_at(const json& j, const std::string& origin, const std::string& field) {
  try {
    if (j.is_number_integer()) return parse_rational(j.dump());
    if (j.is_number_float()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(origin, field, e.what());
  }
  fail(origin, field, "expected a number or a rational string");
}

GaussRational coeff_at(const json& j, const std::string& origin, const std::string& field) {
  if (j.is_array()) {
    if (j.size() != 2) fail(origin, field, "coefficient must be [re, im]");
    return {rational_at(j[0], origin, field + "[0]"), rational_at(j[1], origin, field + "[1]")};
  }
  return GaussRational(rational_at(j, origin, field));
}

struct CoframeName {
  int index = 0;
  bool barred = false;
};

CoframeName coframe_name(const json& j, int n, const std::string& origin, const std::string& field) {
  if (!j.is_string()) fail(origin, field, "expected a coframe name like \"phi2\" or \"phibar1\"");
  const std::string s = j.get<std::string>();
  CoframeName out;
  std::string digits;
  if (s.rfind("phibar", 0) == 0) {
    out.barred = true;
    digits = s.substr(6);
  } else if (s.rfind("phi", 0) == 0) {
    digits = s.substr(3);
  } else {
    fail(origin, field, "unknown coframe name '" + s + "'");
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    fail(origin, field, "unknown coframe name '" + s + "'");
  out.index = std::stoi(digits) - 1;
  if (out.index < 0 || out.index >= n) fail(origin, field, "coframe index out of range in '" + s + "'");
  return out;
}

StructureEquations parse_structure(const json& j, const std::string& origin) {
  const int n = int_at(member(j, "n", origin, "n"), origin, "n");
  if (n < 1 || n > 8) fail(origin, "n", "complex dimension must be in 1..8");
  if (j.contains("metric") && j.at("metric") != "identity")
    fail(origin, "metric", "structure equations are given in a unitary coframe; only \"identity\" is accepted");
  StructureEquations se(n);
  const json& d = member(j, "d", origin, "d");
  if (!d.is_object()) fail(origin, "d", "expected an object keyed by coframe name");
  std::vector<ValidationFailure> forbidden;
  for (const auto& [key, terms] : d.items()) {
    const std::string field = "d." + key;
    const CoframeName target = coframe_name(json(key), n, origin, field);
    if (target.barred) fail(origin, field, "give d of phi^k only; conjugates are implied");
    if (!terms.is_array()) fail(origin, field, "expected a list of terms");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tf = field + "[" + std::to_string(t) + "]";
      const GaussRational c = coeff_at(member(terms[t], "coeff", origin, tf + ".coeff"), origin, tf + ".coeff");
      const json& w = member(terms[t], "wedge", origin, tf + ".wedge");
      if (!w.is_array() || w.size() != 2) fail(origin, tf + ".wedge", "expected two coframe names");
      const CoframeName p = coframe_name(w[0], n, origin, tf + ".wedge[0]");
      const CoframeName q = coframe_name(w[1], n, origin, tf + ".wedge[1]");
      if (!p.barred && !q.barred) {
        se.add_20(target.index, p.index, q.index, c);
      } else if (!p.barred && q.barred) {
        se.add_11(target.index, p.index, q.index, c);
      } else if (p.barred && !q.barred) {
        se.add_11(target.index, q.index, p.index, -c);
      } else if (!c.is_zero()) {
        forbidden.push_back({ValidationKind::Integrability,
                             tf + ": (0,2) term " + w[0].get<std::string>() + "^" + w[1].get<std::string>() +
                                 " in d" + key + " is forbidden (J would not be integrable)",
                             0.0});
      }
    }
  }
  if (!forbidden.empty()) throw ValidationError(std::move(forbidden));
  return se;
}

Matrix<double> real_matrix(const json& j, int dim, const std::string& origin, const std::string& field) {
  if (j.is_string() && j.get<std::string>() == "identity") return Matrix<double>::identity(dim);
  if (!j.is_array() || static_cast<int>(j.size()) != dim) fail(origin, field, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  Matrix<double> m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string rf = field + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != dim) fail(origin, rf, "row has wrong length");
    for (int c = 0; c < dim; ++c)
      m(r, c) = rational_at(row[static_cast<std::size_t>(c)], origin, rf + "[" + std::to_string(c) + "]").get_d();
  }
  return m;
}

RealLieData parse_real(const json& j, const std::string& origin) {
  const int dim = int_at(member(j, "dim", origin, "dim"), origin, "dim");
  if (dim < 2 || dim > 16 || dim % 2 != 0) fail(origin, "dim", "real dimension must be even and in 2..16");
  RealLieData rl(dim);
  const json& br = member(j, "brackets", origin, "brackets");
  if (!br.is_array()) fail(origin, "brackets", "expected a list");
  for (std::size_t t = 0; t < br.size(); ++t) {
    const std::string tf = "brackets[" + std::to_string(t) + "]";
    const int i = int_at(member(br[t], "i", origin, tf + ".i"), origin, tf + ".i") - 1;
    const int k = int_at(member(br[t], "j", origin, tf + ".j"), origin, tf + ".j") - 1;
    if (i < 0 || i >= dim || k < 0 || k >= dim) fail(origin, tf, "basis index out of range (1-based)");
    if (i == k) fail(origin, tf, "[x_i, x_i] is zero by definition");
    const json& out = member(br[t], "out", origin, tf + ".out");
    if (!out.is_object()) fail(origin, tf + ".out", "expected an object index -> coefficient");
    for (const auto& [key, val] : out.items()) {
      const std::string of = tf + ".out." + key;
      int m = 0;
      try {
        std::size_t used = 0;
        m = std::stoi(key, &used) - 1;
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        fail(origin, of, "output index must be an integer");
      }
      if (m < 0 || m >= dim) fail(origin, of, "basis index out of range (1-based)");
      const double v = rational_at(val, origin, of).get_d();
      rl.bracket(m, i, k) += v;
      rl.bracket(m, k, i) -= v;
    }
  }
  rl.J = real_matrix(member(j, "J", origin, "J"), dim, origin, "J");
  rl.g = j.contains("g") ? real_matrix(j.at("g"), dim, origin, "g") : Matrix<double>::identity(dim);
  return rl;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace

ModelFile parse_model(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!j.is_object()) fail(origin, "<root>", "expected a JSON object");
  const std::string type = member(j, "type", origin, "type").is_string() ? j.at("type").get<std::string>() : "";
  const bool has_d = j.contains("d"), has_br = j.contains("brackets");
  if (has_d && has_br) fail(origin, "<root>", "both 'd' and 'brackets' present; a model file has exactly one shape");
  std::string name = j.contains("name") && j.at("name").is_string() ? j.at("name").get<std::string>() : origin;
  const std::string hash = hex64(fnv1a64(j.dump()));
  if (type == "structure_equations") return {name, hash, parse_structure(j, origin)};
  if (type == "real_lie") return {name, hash, parse_real(j, origin)};
  fail(origin, "type", "must be \"structure_equations\" or \"real_lie\"");
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string origin = path;
  const auto slash = origin.find_last_of('/');
  if (slash != std::string::npos) origin = origin.substr(slash + 1);
  return parse_model(buf.str(), origin);
}

std::vector<ValidationFailure> validate(const ModelFile& mf) {
  if (const auto* se = std::get_if<StructureEquations>(&mf.input)) return validate(*se);
  return validate(std::get<RealLieData>(mf.input));
}

std::vector<Rational> parse_s_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("--s: empty entry in '" + text + "'");
    try {
      out.push_back(parse_rational(item.substr(b, e - b + 1)));
    } catch (const std::invalid_argument& ex) {
      throw ParseError("--s: " + std::string(ex.what()));
    }
  }
  if (out.empty()) throw ParseError("--s: no parameter values given");
  return out;
}

std::string special_label(const Rational& s) {
  if (s == 0) return "Chern";
  if (s == Rational(1, 2)) return "conformal";
  if (s == Rational(2, 3)) return "minimal torsion";
  if (s == 1) return "Lichnerowicz";
  if (s == 2) return "Bismut";
  return "";
}

std::string decimal(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

template <class S>
void fill_report(ReportDocument& doc, const HermitianModel<S>& m, const std::vector<Rational>& s_list, double tol,
                 S (*lift)(const Rational&)) {
  const auto ct = chern_torsion(m);
  double nt = 0.0, ne = 0.0;
  for (const auto& x : ct.T.data()) nt += magnitude(x) * magnitude(x);
  for (const auto& x : ct.eta.data()) ne += magnitude(x) * magnitude(x);
  doc.norm_T = decimal(nt);
  doc.norm_eta = decimal(ne);
  doc.balanced = ScalarTraits<S>::exact ? ct.eta.is_exactly_zero() : ct.eta.max_abs() <= tol;
  doc.kahler = is_kahler(m, tol);
  doc.verdict = "CONSISTENT";
  for (const auto& s : s_list) {
    const S sv = lift(s);
    const auto kl = kahler_like_residual(m, sv);
    ReportRow row;
    row.s = to_string(s);
    row.label = special_label(s);
    row.rho_bianchi = decimal(kl.rho_bianchi);
    row.rho_type = decimal(kl.rho_type);
    row.rho_flat = decimal(kl.rho_flat);
    row.ricci = decimal(ricci_first(m, sv).max_abs());
    row.flat = kl.rho_flat <= tol;
    row.kahler_like = kl.rho_bianchi <= tol && kl.rho_type <= tol;
    const bool exempt = s == 0 || s == 2;
    if (row.kahler_like && !exempt && !doc.kahler) doc.verdict = "VIOLATION";
    doc.rows.push_back(std::move(row));
  }
}

GaussRational lift_exact(const Rational& q) { return GaussRational(q); }
Complex lift_float(const Rational& q) { return {q.get_d(), 0.0}; }

}  // namespace

ReportDocument build_report(const ModelFile& mf, const std::vector<Rational>& s_list, double tol) {
  ReportDocument doc;
  doc.model = mf.name;
  doc.hash = mf.hash;
  doc.tol = decimal(tol);
  if (const auto* se = std::get_if<StructureEquations>(&mf.input)) {
    doc.backend = "exact";
    fill_report(doc, build_model(*se), s_list, tol, &lift_exact);
  } else {
    doc.backend = "float";
    fill_report(doc, build_model(std::get<RealLieData>(mf.input)), s_list, tol, &lift_float);
  }
  return doc;
}

json to_json(const ReportDocument& doc) {
  json rows = json::array();
  for (const auto& r : doc.rows)
    rows.push_back({{"s", r.s},
                    {"label", r.label},
                    {"rho_bianchi", r.rho_bianchi},
                    {"rho_type", r.rho_type},
                    {"rho_flat", r.rho_flat},
                    {"ricci", r.ricci},
                    {"flat", r.flat},
                    {"kahler_like", r.kahler_like}});
  return {{"model", doc.model},
          {"hash", doc.hash},
          {"backend", doc.backend},
          {"tol", doc.tol},
          {"torsion", {{"norm_T", doc.norm_T}, {"norm_eta", doc.norm_eta}, {"balanced", doc.balanced}, {"kahler", doc.kahler}}},
          {"rows", rows},
          {"verdict", doc.verdict}};
}

ReportDocument report_from_json(const json& j) {
  try {
    ReportDocument doc;
    doc.model = j.at("model").get<std::string>();
    doc.hash = j.at("hash").get<std::string>();
    doc.backend = j.at("backend").get<std::string>();
    doc.tol = j.at("tol").get<std::string>();
    const json& t = j.at("torsion");
    doc.norm_T = t.at("norm_T").get<std::string>();
    doc.norm_eta = t.at("norm_eta").get<std::string>();
    doc.balanced = t.at("balanced").get<bool>();
    doc.kahler = t.at("kahler").get<bool>();
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.s = r.at("s").get<std::string>();
      row.label = r.at("label").get<std::string>();
      row.rho_bianchi = r.at("rho_bianchi").get<std::string>();
      row.rho_type = r.at("rho_type").get<std::string>();
      row.rho_flat = r.at("rho_flat").get<std::string>();
      row.ricci = r.at("ricci").get<std::string>();
      row.flat = r.at("flat").get<bool>();
      row.kahler_like = r.at("kahler_like").get<bool>();
      doc.rows.push_back(std::move(row));
    }
    doc.verdict = j.at("verdict").get<std::string>();
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report document: ") + e.what());
  }
}

std::string render_text(const ReportDocument& doc) {
  std::ostringstream os;
  os << "model    " << doc.model << "  (hash " << doc.hash << ", " << doc.backend << " arithmetic)\n";
  os << "torsion  |T|^2 = " << doc.norm_T << "  |eta|^2 = " << doc.norm_eta << "  balanced: " << (doc.balanced ? "yes" : "no")
     << "  kahler: " << (doc.kahler ? "yes" : "no") << "\n\n";
  os << std::left << std::setw(8) << "s" << std::setw(17) << "connection" << std::setw(23) << "rho_bianchi" << std::setw(23)
     << "rho_type" << std::setw(23) << "rho_flat" << std::setw(23) << "|Ric|" << "kahler-like\n";
  for (const auto& r : doc.rows)
    os << std::left << std::setw(8) << r.s << std::setw(17) << (r.label.empty() ? "-" : r.label) << std::setw(23)
       << r.rho_bianchi << std::setw(23) << r.rho_type << std::setw(23) << r.rho_flat << std::setw(23) << r.ricci
       << (r.kahler_like ? (r.flat ? "yes (flat)" : "yes") : "no") << "\n";
  os << "\nverdict  " << doc.verdict << "  (tol " << doc.tol << ")\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Verification runs

bool LemmaSummary::all_pass() const {
  for (const auto& r : rows)
    if (r.failed > 0) return false;
  return !rows.empty();
}

LemmaSummary verify_lemmas(int n, int draws, std::uint64_t seed, const Claims& claims) {
  if (n < 2 || n > 4) throw ParseError("--n must be in 2..4");
  if (draws < 1) throw ParseError("--draws must be at least 1");
  LemmaSummary sum{n, draws, seed, {}, {}};
  std::mt19937_64 rng(seed);
  for (int d = 0; d < draws; ++d) {
    const auto a = sampling::lck_vector(rng, n);
    const auto rep = formal_suite(derivative_table(lck_symbolic(a)), claims);
    bool draw_failed = false;
    for (std::size_t k = 0; k < rep.items.size(); ++k) {
      const auto& item = rep.items[k];
      if (sum.rows.size() <= k) sum.rows.push_back({item.name});
      LemmaRow& row = sum.rows[k];
      if (item.pass) {
        ++row.passed;
      } else {
        ++row.failed;
        draw_failed = true;
        if (row.first_failing_draw < 0) {
          row.first_failing_draw = d;
          row.detail = item.detail;
        }
      }
    }
    if (draw_failed && sum.counterexample.empty()) {
      std::string s = "draw " + std::to_string(d) + ": a = (";
      for (std::size_t i = 0; i < a.size(); ++i) s += (i ? ", " : "") + to_string(a[i]);
      sum.counterexample = s + ")";
    }
  }
  return sum;
}

namespace {

std::string roots_str(const std::vector<Root>& roots) {
  std::string s = "{";
  for (std::size_t i = 0; i < roots.size(); ++i)
    s += (i ? ", " : "") + to_string(roots[i].value) + ":" + std::to_string(roots[i].multiplicity);
  return s + "}";
}

std::string row_str(const std::array<mpz_class, 3>& r) {
  return "(" + r[0].get_str() + "," + r[1].get_str() + "," + r[2].get_str() + ")";
}

}  // namespace

std::vector<SystemCheck> verify_system(const Claims& claims) {
  std::vector<SystemCheck> out;
  {
    SystemCheck c{"coefficient identities"};
    const auto ids = coefficient_identities(claims);
    c.pass = true;
    int bad = 0;
    for (const auto& i : ids)
      if (!i.pass) {
        c.pass = false;
        if (bad++ < 3) c.detail += (c.detail.empty() ? "failing: " : ", ") + i.name;
      }
    if (c.pass) c.detail = std::to_string(ids.size()) + " identities exact";
    out.push_back(c);
  }
  RationalPoly det;
  {
    SystemCheck c{"determinant factorisation"};
    try {
      det = determinant(claims);
      c.pass = det == factored_determinant();
      c.detail = "degree " + std::to_string(det.degree()) + ", leading coefficient " + to_string(det.leading()) +
                 (c.pass ? ", equals 64 s^8 (s-2)^3 (s-1)^3 (2s-1)^3 (3s-2)^2 (5s-4)" : ", differs from the factored form");
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    out.push_back(c);
  }
  {
    SystemCheck c{"singular set"};
    const std::vector<Root> want{{Rational(0), 8}, {Rational(1, 2), 3}, {Rational(2, 3), 2},
                                 {Rational(4, 5), 1}, {Rational(1), 3},   {Rational(2), 3}};
    try {
      const auto got = singular_set(claims);
      c.pass = got == want;
      c.detail = roots_str(got);
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    out.push_back(c);
  }
  {
    SystemCheck c{"reduced rank at 2/3"};
    const auto rr = reduced_rank(Rational(2, 3), claims);
    bool plus = false, minus = false, others = false;
    for (const auto& r : rr.rows) {
      const std::string s = row_str(r);
      if (s == "(0,1,1)") plus = true;
      else if (s == "(0,1,-1)") minus = true;
      else if (s != "(0,0,0)") others = true;
    }
    c.pass = rr.rank == 2 && plus && minus && !others;
    c.detail = "rank " + std::to_string(rr.rank) + ", rows";
    for (const auto& r : rr.rows) c.detail += " " + row_str(r);
    out.push_back(c);
  }
  {
    SystemCheck c{"reduced rank at 4/5"};
    const auto rr = reduced_rank(Rational(4, 5), claims);
    c.pass = rr.rank == 3;
    c.detail = "rank " + std::to_string(rr.rank);
    out.push_back(c);
  }
  return out;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"torus2.json", "flat torus, n = 2", "Kahler, balanced, flat for every s", true, true,
       {Rational(-1), Rational(0), Rational(1, 2), Rational(1), Rational(2), Rational(3)}},
      {"torus3.json", "flat torus, n = 3", "Kahler, balanced, flat for every s", true, true,
       {Rational(-1), Rational(0), Rational(2, 3), Rational(1), Rational(2)}},
      {"iwasawa.json", "Iwasawa manifold, n = 3", "Chern-flat, balanced, non-Kahler, |T|^2 = 1/2", false, true,
       {Rational(0)}},
      {"hopf.json", "Hopf surface (su(2) + u(1)), n = 2", "Bismut-flat at s = 2, not balanced, non-Kahler", false, false,
       {Rational(2)}},
  };
  return entries;
}

std::vector<std::string> check_catalog_entry(const CatalogEntry& e, const std::string& fixture_dir, double tol) {
  std::vector<std::string> bad;
  const ModelFile mf = load_model(fixture_dir + "/" + e.file);
  const auto fails = validate(mf);
  if (!fails.empty()) {
    bad.push_back("does not validate: " + to_string(fails.front().kind));
    return bad;
  }
  const auto doc = build_report(mf, e.flat_at, tol);
  if (doc.kahler != e.kahler) bad.push_back(std::string("kahler flag ") + (doc.kahler ? "true" : "false"));
  if (doc.balanced != e.balanced) bad.push_back(std::string("balanced flag ") + (doc.balanced ? "true" : "false"));
  for (const auto& r : doc.rows)
    if (!r.flat) bad.push_back("not flat at s = " + r.s + " (rho_flat " + r.rho_flat + ")");
  return bad;
}

Claims claims_from_tamper(const std::string& spec) {
  if (spec.empty() || spec == "none") return standard_claims();
  if (spec == "a" || spec == "b" || spec == "c") return tampered_claims(spec[0]);
  int r = 0, c = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "entry:%d,%d%c", &r, &c, &tail) == 2 && r >= 1 && r <= 4 && c >= 1 && c <= 4)
    return tampered_entry(r, c);
  throw ParseError("--tamper: expected a, b, c or entry:ROW,COL with 1 <= ROW, COL <= 4");
}

// ---------------------------------------------------------------------------
// Commands

int cmd_validate(const std::string& path, std::ostream& out) {
  try {
    const ModelFile mf = load_model(path);
    const auto fails = validate(mf);
    if (fails.empty()) {
      out << "ok  " << mf.name << "  (" << (mf.exact() ? "structure_equations" : "real_lie") << ", n = " << mf.complex_dim()
          << ", hash " << mf.hash << ")\n";
      return kExitOk;
    }
    for (const auto& f : fails) out << "FAIL [" << to_string(f.kind) << "] " << f.message << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    for (const auto& f : e.failures()) out << "FAIL [" << to_string(f.kind) << "] " << f.message << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    out << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    out << "io error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_report(const std::string& path, const std::string& s_list, const std::string& format, double tol,
               std::ostream& out) {
  try {
    if (format != "text" && format != "json") throw ParseError("--format must be text or json");
    const auto svals = parse_s_list(s_list);
    const ModelFile mf = load_model(path);
    const auto doc = build_report(mf, svals, tol);
    if (format == "json") out << to_json(doc).dump(2) << "\n";
    else out << render_text(doc);
    return doc.verdict == "CONSISTENT" ? kExitOk : kExitVerification;
  } catch (const ValidationError& e) {
    for (const auto& f : e.failures()) out << "FAIL [" << to_string(f.kind) << "] " << f.message << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    out << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    out << "io error: " << e.what() << "\n";
    return kExitIo;
  }
}

int cmd_verify_lemmas(int n, int draws, std::uint64_t seed, const Claims& claims, std::ostream& out) {
  LemmaSummary sum;
  try {
    sum = verify_lemmas(n, draws, seed, claims);
  } catch (const ParseError& e) {
    out << "parse error: " << e.what() << "\n";
    return kExitIo;
  }
  out << "formal lemma suite: n = " << n << ", draws = " << draws << ", seed = " << seed << ", s symbolic\n\n";
  for (const auto& r : sum.rows) {
    out << std::left << std::setw(44) << r.name << (r.failed ? "FAIL" : "pass") << "  " << r.passed << "/" << sum.draws;
    if (r.failed) out << "  first failure at draw " << r.first_failing_draw << ": " << r.detail;
    out << "\n";
  }
  if (!sum.all_pass()) {
    out << "\ncounterexample " << sum.counterexample << "\n";
    return kExitVerification;
  }
  out << "\nall " << sum.rows.size() << " items exact on every draw\n";
  return kExitOk;
}

int cmd_verify_system(const Claims& claims, std::ostream& out) {
  const auto checks = verify_system(claims);
  int passed = 0;
  for (const auto& c : checks) {
    out << std::left << std::setw(28) << c.name << (c.pass ? "pass" : "FAIL") << "  " << c.detail << "\n";
    passed += c.pass ? 1 : 0;
  }
  out << "\n" << passed << "/" << checks.size() << " pass\n";
  return passed == static_cast<int>(checks.size()) ? kExitOk : kExitVerification;
}

int cmd_catalog(const std::string& fixture_dir, std::ostream& out) {
  int code = kExitOk;
  for (const auto& e : catalog()) {
    out << std::left << std::setw(14) << e.file << std::setw(38) << e.title << e.expected << "\n";
    try {
      const auto bad = check_catalog_entry(e, fixture_dir);
      if (bad.empty()) {
        out << "              checked: ok\n";
      } else {
        for (const auto& b : bad) out << "              MISMATCH: " << b << "\n";
        code = std::max(code, static_cast<int>(kExitVerification));
      }
    } catch (const std::exception& ex) {
      out << "              cannot load: " << ex.what() << "\n";
      code = kExitIo;
    }
  }
  return code;
}

}  // namespace gauduchon
