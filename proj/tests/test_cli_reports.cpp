#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "gauduchon/reports.hpp"
#include "models.hpp"

using namespace gauduchon;
using nlohmann::json;

namespace {

const std::string kFixtures = GAUDUCHON_FIXTURE_DIR;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

json coeff_json(const GaussRational& z) { return json::array({to_string(z.real()), to_string(z.imag())}); }

std::string coframe(int k, bool bar) { return std::string(bar ? "phibar" : "phi") + std::to_string(k + 1); }

// Serialises structure equations the way a user would write them; (1,1)
// terms alternate between phi^phibar and phibar^phi order.
json to_model_json(const StructureEquations& se) {
  json d = json::object();
  bool flip = false;
  for (int k = 0; k < se.n; ++k) {
    json terms = json::array();
    for (int i = 0; i < se.n; ++i)
      for (int j = i + 1; j < se.n; ++j)
        if (!se.a(k, i, j).is_zero())
          terms.push_back({{"coeff", coeff_json(se.a(k, i, j))}, {"wedge", {coframe(i, false), coframe(j, false)}}});
    for (int i = 0; i < se.n; ++i)
      for (int j = 0; j < se.n; ++j) {
        const GaussRational& c = se.b(k, i, j);
        if (c.is_zero()) continue;
        if ((flip = !flip))
          terms.push_back({{"coeff", coeff_json(c)}, {"wedge", {coframe(i, false), coframe(j, true)}}});
        else
          terms.push_back({{"coeff", coeff_json(-c)}, {"wedge", {coframe(j, true), coframe(i, false)}}});
      }
    d[coframe(k, false)] = terms;
  }
  return {{"type", "structure_equations"}, {"n", se.n}, {"d", d}, {"metric", "identity"}};
}

std::string hopf_text(const std::string& extra_bracket = "") {
  return R"({"type":"real_lie","dim":4,"brackets":[{"i":1,"j":2,"out":{"3":1}},{"i":2,"j":3,"out":{"1":1}},)" +
         extra_bracket + R"({"i":3,"j":1,"out":{"2":1}}],
  "J":[[0,-1,0,0],[1,0,0,0],[0,0,0,-1],[0,0,1,0]],"g":"identity"})";
}

}  // namespace

TEST(ModelFile, FixturesMatchInCodeModels) {
  const ModelFile iw = load_model(fixture("iwasawa.json"));
  ASSERT_TRUE(iw.exact());
  EXPECT_EQ(iw.name, "iwasawa");
  EXPECT_EQ(iw.complex_dim(), 3);
  const auto& se = std::get<StructureEquations>(iw.input);
  EXPECT_EQ(se.A, models::iwasawa().A);
  EXPECT_EQ(se.B, models::iwasawa().B);

  const ModelFile hopf = load_model(fixture("hopf.json"));
  ASSERT_FALSE(hopf.exact());
  EXPECT_EQ(hopf.complex_dim(), 2);
  const auto& rl = std::get<RealLieData>(hopf.input);
  const auto ref = models::hopf_data();
  EXPECT_EQ(rl.f, ref.f);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      EXPECT_EQ(rl.J(r, c), ref.J(r, c));
      EXPECT_EQ(rl.g(r, c), r == c ? 1.0 : 0.0);
    }

  for (const char* f : {"torus2.json", "torus3.json", "iwasawa.json", "hopf.json"})
    EXPECT_TRUE(validate(load_model(fixture(f))).empty()) << f;
}

TEST(ModelFile, CoefficientForms) {
  const auto parse = [](const std::string& coeff) {
    const ModelFile mf = parse_model(R"({"type":"structure_equations","n":3,"d":{"phi3":[{"coeff":)" + coeff +
                                     R"(,"wedge":["phi2","phi1"]}]}})");
    return std::get<StructureEquations>(mf.input).a(2, 0, 1);
  };
  // phi2 ^ phi1 = -phi1 ^ phi2
  EXPECT_EQ(parse("[1, 0]"), GaussRational(Rational(-1)));
  EXPECT_EQ(parse("[\"1/3\", \"-2\"]"), GaussRational(Rational(-1, 3), Rational(2)));
  EXPECT_EQ(parse("2"), GaussRational(Rational(-2)));
  EXPECT_EQ(parse("\"3/4\""), GaussRational(Rational(-3, 4)));
  EXPECT_EQ(parse("0.5"), GaussRational(Rational(-1, 2)));
}

TEST(ModelFile, BracketAntisymmetryNormalised) {
  const std::string swapped = R"({"type":"real_lie","dim":4,"brackets":[{"i":2,"j":1,"out":{"3":-1}},
    {"i":2,"j":3,"out":{"1":1}},{"i":1,"j":3,"out":{"2":-1}}],
    "J":[[0,-1,0,0],[1,0,0,0],[0,0,0,-1],[0,0,1,0]]})";
  const auto a = std::get<RealLieData>(parse_model(swapped).input);
  EXPECT_EQ(a.f, models::hopf_data().f);
}

TEST(ModelFile, ParseErrorsCarryContext) {
  const auto message = [](const std::string& text) -> std::string {
    try {
      parse_model(text, "m.json");
    } catch (const ParseError& e) {
      return e.what();
    }
    return "no error";
  };
  EXPECT_NE(message("{\n \"type\": \"real_lie\",\n oops }").find("line 3"), std::string::npos);
  EXPECT_NE(message(R"({"type":"structure_equations","n":2,"d":{"phi3":[]}})").find("d.phi3"), std::string::npos);
  EXPECT_NE(message(R"({"type":"structure_equations","n":2,"d":{"phi1":[{"coeff":[1,0],"wedge":["phi1","psi2"]}]}})")
                .find("d.phi1[0].wedge[1]"),
            std::string::npos);
  EXPECT_NE(message(R"({"type":"structure_equations","n":2,"d":{"phi1":[{"coeff":"1/0","wedge":["phi1","phi2"]}]}})")
                .find("coeff"),
            std::string::npos);
  EXPECT_NE(message(R"({"type":"structure_equations","n":2,"d":{},"brackets":[]})").find("both"), std::string::npos);
  EXPECT_NE(message(R"({"type":"structure_equations","n":2,"d":{},"metric":[[1]]})").find("metric"), std::string::npos);
  EXPECT_NE(message(R"({"type":"real_lie","dim":4,"brackets":[{"i":1,"j":5,"out":{}}],"J":"identity"})")
                .find("brackets[0]"),
            std::string::npos);
  EXPECT_NE(message(R"({"type":"real_lie","dim":3,"brackets":[],"J":"identity"})").find("dim"), std::string::npos);
  EXPECT_NE(message(R"({"type":"kahler"})").find("type"), std::string::npos);
  EXPECT_NE(message("[1, 2]").find("object"), std::string::npos);
  EXPECT_THROW(load_model(fixture("does_not_exist.json")), IoError);
}

TEST(ModelFile, ZeroTwoTermRejectedAtLoad) {
  try {
    load_model(fixture("invalid/iwasawa_02_term.json"));
    FAIL() << "expected rejection";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.failures().size(), 1u);
    EXPECT_EQ(e.failures()[0].kind, ValidationKind::Integrability);
  }
  // a zero (0,2) coefficient is harmless
  EXPECT_NO_THROW(parse_model(
      R"({"type":"structure_equations","n":2,"d":{"phi2":[{"coeff":[0,0],"wedge":["phibar1","phibar2"]}]}})"));
}

TEST(ModelFile, InvalidFixturesNameTheirFailure) {
  const auto kinds = [](const std::string& f) {
    std::vector<ValidationKind> out;
    for (const auto& v : validate(load_model(fixture("invalid/" + f)))) out.push_back(v.kind);
    return out;
  };
  const auto has = [](const std::vector<ValidationKind>& v, ValidationKind k) {
    return std::find(v.begin(), v.end(), k) != v.end();
  };
  EXPECT_TRUE(has(kinds("hopf_sheared_j.json"), ValidationKind::Nijenhuis));
  EXPECT_TRUE(has(kinds("hopf_jacobi.json"), ValidationKind::Jacobi));
  EXPECT_TRUE(has(kinds("hopf_bad_metric.json"), ValidationKind::MetricCompat));
  EXPECT_TRUE(has(kinds("iwasawa_d_squared.json"), ValidationKind::DSquared));
  EXPECT_FALSE(has(kinds("hopf_bad_metric.json"), ValidationKind::Nijenhuis));
}

TEST(ModelFile, HashIgnoresFormattingButNotContent) {
  const std::string a = hopf_text();
  std::string spaced;
  for (char ch : a) spaced += ch == ',' ? std::string(",\n   ") : std::string(1, ch);
  EXPECT_EQ(parse_model(a).hash, parse_model(spaced).hash);
  EXPECT_NE(parse_model(a).hash, parse_model(hopf_text(R"({"i":4,"j":1,"out":{"1":1}},)")).hash);
  EXPECT_EQ(parse_model(a).hash.size(), 16u);
  // FNV-1a reference values
  EXPECT_EQ(fnv1a64(""), 14695981039346656037ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Property, StructureEquationsRoundTripThroughJson) {
  std::mt19937_64 rng(31);
  for (int draw = 0; draw < 20; ++draw) {
    const int n = 2 + draw % 3;
    const StructureEquations se = draw % 2 ? models::random_solvable(rng, n) : models::random_nilpotent(rng, n);
    const ModelFile mf = parse_model(to_model_json(se).dump(1));
    const auto& back = std::get<StructureEquations>(mf.input);
    EXPECT_EQ(back.A, se.A) << "draw " << draw;
    EXPECT_EQ(back.B, se.B) << "draw " << draw;
    EXPECT_TRUE(validate(mf).empty());
  }
}

TEST(SList, Parsing) {
  const auto v = parse_s_list("0, 1/2,2/3 ,-3,4/5");
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v[1], Rational(1, 2));
  EXPECT_EQ(v[3], Rational(-3));
  EXPECT_THROW(parse_s_list(""), ParseError);
  EXPECT_THROW(parse_s_list("1,,2"), ParseError);
  EXPECT_THROW(parse_s_list("x"), ParseError);
  EXPECT_THROW(parse_s_list("1/0"), ParseError);
}

TEST(Labels, SpecialValues) {
  EXPECT_EQ(special_label(Rational(0)), "Chern");
  EXPECT_EQ(special_label(Rational(1, 2)), "conformal");
  EXPECT_EQ(special_label(Rational(2, 3)), "minimal torsion");
  EXPECT_EQ(special_label(Rational(1)), "Lichnerowicz");
  EXPECT_EQ(special_label(Rational(2)), "Bismut");
  EXPECT_EQ(special_label(Rational(4, 5)), "");
  EXPECT_EQ(decimal(0.0), "0");
  EXPECT_EQ(decimal(-0.0), "0");
  EXPECT_EQ(decimal(0.25), "0.25");
  EXPECT_EQ(decimal(2.0 / 9.0), "0.222222222222222");
}

TEST(Report, Torus) {
  const auto doc = build_report(load_model(fixture("torus2.json")), parse_s_list("0,1,2"));
  EXPECT_EQ(doc.backend, "exact");
  EXPECT_TRUE(doc.kahler);
  EXPECT_TRUE(doc.balanced);
  EXPECT_EQ(doc.verdict, "CONSISTENT");
  ASSERT_EQ(doc.rows.size(), 3u);
  for (const auto& r : doc.rows) {
    EXPECT_EQ(r.rho_bianchi, "0");
    EXPECT_EQ(r.rho_type, "0");
    EXPECT_EQ(r.rho_flat, "0");
    EXPECT_EQ(r.ricci, "0");
    EXPECT_TRUE(r.kahler_like);
  }
}

TEST(Report, HopfBismutExempt) {
  const auto doc = build_report(load_model(fixture("hopf.json")), parse_s_list("2"));
  EXPECT_EQ(doc.backend, "float");
  EXPECT_FALSE(doc.kahler);
  EXPECT_FALSE(doc.balanced);
  EXPECT_EQ(doc.norm_T, "0.25");
  EXPECT_EQ(doc.norm_eta, "0.125");
  ASSERT_EQ(doc.rows.size(), 1u);
  EXPECT_TRUE(doc.rows[0].flat);
  EXPECT_EQ(doc.rows[0].label, "Bismut");
  EXPECT_LE(std::stod(doc.rows[0].rho_flat), 1e-10);
  EXPECT_EQ(doc.verdict, "CONSISTENT");
}

TEST(Report, IwasawaChernFlatOnlyAndRicciFlat) {
  const auto doc = build_report(load_model(fixture("iwasawa.json")), parse_s_list("0,1/2,2/3,4/5,1,2"));
  EXPECT_FALSE(doc.kahler);
  EXPECT_TRUE(doc.balanced);
  EXPECT_EQ(doc.norm_T, "0.5");
  EXPECT_EQ(doc.norm_eta, "0");
  ASSERT_EQ(doc.rows.size(), 6u);
  for (std::size_t k = 0; k < doc.rows.size(); ++k) {
    EXPECT_EQ(doc.rows[k].flat, k == 0) << doc.rows[k].s;
    EXPECT_EQ(doc.rows[k].ricci, "0") << doc.rows[k].s;
    EXPECT_EQ(doc.rows[k].kahler_like, k == 0) << doc.rows[k].s;
  }
  // exact backend: R^s = s R-tilde with rho_flat = s/4 (hand value at s = 1)
  EXPECT_EQ(doc.rows[4].rho_flat, "0.25");
  EXPECT_EQ(doc.rows[4].rho_bianchi, "0.5");
  EXPECT_EQ(doc.verdict, "CONSISTENT");
}

TEST(Report, ViolationVerdictLogic) {
  // A Kahler-like row at s outside {0, 2} on a non-Kahler model must flip the
  // verdict; the torus is Kahler so it never does.
  auto doc = build_report(load_model(fixture("torus3.json")), parse_s_list("1/3,5/2"));
  EXPECT_EQ(doc.verdict, "CONSISTENT");
  // a huge tolerance makes everything "Kahler-like"
  doc = build_report(load_model(fixture("iwasawa.json")), parse_s_list("0,2"), 10.0);
  EXPECT_EQ(doc.verdict, "CONSISTENT");
  doc = build_report(load_model(fixture("iwasawa.json")), parse_s_list("1"), 10.0);
  EXPECT_EQ(doc.verdict, "VIOLATION");
}

TEST(Report, JsonRoundTripAndSchema) {
  for (const char* f : {"torus2.json", "iwasawa.json", "hopf.json"}) {
    const auto doc = build_report(load_model(fixture(f)), parse_s_list("-1,0,1/3,2/3,2,4"));
    const json j = to_json(doc);
    EXPECT_EQ(report_from_json(json::parse(j.dump())), doc) << f;
    for (const auto& r : j.at("rows"))
      for (const char* key : {"rho_bianchi", "rho_type", "rho_flat", "ricci", "s"}) EXPECT_TRUE(r.at(key).is_string());
  }
  EXPECT_THROW(report_from_json(json::parse(R"({"model":"x"})")), ParseError);
}

TEST(Report, TextRendering) {
  const auto doc = build_report(load_model(fixture("iwasawa.json")), parse_s_list("0,4/5"));
  const std::string t = render_text(doc);
  EXPECT_NE(t.find("Chern"), std::string::npos);
  EXPECT_NE(t.find("4/5"), std::string::npos);
  EXPECT_NE(t.find("CONSISTENT"), std::string::npos);
  EXPECT_NE(t.find(doc.hash), std::string::npos);
}

TEST(VerifyLemmas, SmallRunsPass) {
  const auto s2 = verify_lemmas(2, 1, 0);
  EXPECT_TRUE(s2.all_pass());
  EXPECT_EQ(s2.rows.size(), 20u);
  const auto s3 = verify_lemmas(3, 3, 5);
  EXPECT_TRUE(s3.all_pass());
  EXPECT_TRUE(s3.counterexample.empty());
  EXPECT_THROW(verify_lemmas(5, 1, 0), ParseError);
  EXPECT_THROW(verify_lemmas(2, 0, 0), ParseError);
}

TEST(VerifyLemmas, TamperedBFailsNormDerivativeThree) {
  const auto sum = verify_lemmas(2, 2, 0, claims_from_tamper("b"));
  EXPECT_FALSE(sum.all_pass());
  const auto it = std::find_if(sum.rows.begin(), sum.rows.end(),
                               [](const LemmaRow& r) { return r.name == "norm derivative (3)"; });
  ASSERT_NE(it, sum.rows.end());
  EXPECT_EQ(it->failed, 2);
  EXPECT_EQ(it->first_failing_draw, 0);
  EXPECT_FALSE(sum.counterexample.empty());
}

TEST(VerifySystem, AllFivePass) {
  const auto checks = verify_system();
  ASSERT_EQ(checks.size(), 5u);
  for (const auto& c : checks) EXPECT_TRUE(c.pass) << c.name << ": " << c.detail;
  EXPECT_NE(checks[1].detail.find("degree 20"), std::string::npos);
  EXPECT_EQ(checks[2].detail, "{0:8, 1/2:3, 2/3:2, 4/5:1, 1:3, 2:3}");
}

TEST(VerifySystem, TamperedClaimsFail) {
  std::vector<std::string> tampers{"a", "b", "c"};
  const PolyMatrix m = system_matrix();
  for (int r = 1; r <= 4; ++r)
    for (int c = 1; c <= 4; ++c)
      if (!m(r - 1, c - 1).is_zero()) tampers.push_back("entry:" + std::to_string(r) + "," + std::to_string(c));
  EXPECT_GE(tampers.size(), 10u);
  for (const auto& t : tampers) {
    const auto checks = verify_system(claims_from_tamper(t));
    EXPECT_TRUE(std::any_of(checks.begin(), checks.end(), [](const SystemCheck& c) { return !c.pass; })) << t;
  }
  // a zero entry stays zero under a sign flip
  EXPECT_TRUE(m(0, 0).is_zero());
  EXPECT_THROW(claims_from_tamper("d"), ParseError);
  EXPECT_THROW(claims_from_tamper("entry:5,1"), ParseError);
  EXPECT_THROW(claims_from_tamper("entry:1,1x"), ParseError);
}

TEST(Catalog, EntriesCheckOut) {
  ASSERT_EQ(catalog().size(), 4u);
  for (const auto& e : catalog()) EXPECT_TRUE(check_catalog_entry(e, kFixtures).empty()) << e.file;
  // a wrong expectation is reported
  CatalogEntry wrong = catalog()[2];
  wrong.flat_at = {Rational(1)};
  wrong.kahler = true;
  EXPECT_EQ(check_catalog_entry(wrong, kFixtures).size(), 2u);
}

TEST(Commands, ExitCodes) {
  std::ostringstream out;
  EXPECT_EQ(cmd_validate(fixture("torus2.json"), out), kExitOk);
  EXPECT_EQ(cmd_validate(fixture("invalid/iwasawa_02_term.json"), out), kExitValidation);
  EXPECT_EQ(cmd_validate(fixture("invalid/hopf_sheared_j.json"), out), kExitValidation);
  EXPECT_NE(out.str().find("[nijenhuis]"), std::string::npos);
  EXPECT_EQ(cmd_validate(fixture("invalid/malformed.json"), out), kExitIo);
  EXPECT_NE(out.str().find("line 4"), std::string::npos);
  EXPECT_EQ(cmd_validate(fixture("missing.json"), out), kExitIo);

  EXPECT_EQ(cmd_report(fixture("hopf.json"), "2", "json", 1e-9, out), kExitOk);
  EXPECT_EQ(cmd_report(fixture("iwasawa.json"), "1", "text", 10.0, out), kExitVerification);
  EXPECT_EQ(cmd_report(fixture("iwasawa.json"), "1", "xml", 1e-9, out), kExitIo);
  EXPECT_EQ(cmd_report(fixture("invalid/iwasawa_02_term.json"), "1", "text", 1e-9, out), kExitValidation);

  EXPECT_EQ(cmd_verify_lemmas(2, 1, 0, standard_claims(), out), kExitOk);
  std::ostringstream bad;
  EXPECT_EQ(cmd_verify_lemmas(2, 1, 0, claims_from_tamper("b"), bad), kExitVerification);
  EXPECT_NE(bad.str().find("counterexample draw 0"), std::string::npos);

  std::ostringstream sys;
  EXPECT_EQ(cmd_verify_system(standard_claims(), sys), kExitOk);
  EXPECT_NE(sys.str().find("5/5 pass"), std::string::npos);
  EXPECT_EQ(cmd_verify_system(claims_from_tamper("c"), out), kExitVerification);

  std::ostringstream cat;
  EXPECT_EQ(cmd_catalog(kFixtures, cat), kExitOk);
  for (const char* f : {"torus2.json", "torus3.json", "iwasawa.json", "hopf.json"})
    EXPECT_NE(cat.str().find(f), std::string::npos);
  EXPECT_EQ(cmd_catalog(kFixtures + "/nowhere", out), kExitIo);
}
