#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gauduchon/reports.hpp"

#ifndef GAUDUCHON_FIXTURE_DIR
#define GAUDUCHON_FIXTURE_DIR "fixtures"
#endif

int main(int argc, char** argv) {
  using namespace gauduchon;

  CLI::App app{"Gauduchon connections on left-invariant Hermitian structures"};
  app.require_subcommand(1);

  std::string model_path;
  std::string s_list = "0,1/2,2/3,1,2";
  std::string format = "text";
  double tol = 1e-9;
  int n = 2, draws = 1;
  std::uint64_t seed = 0;
  std::string tamper;  // test hook, see claims_from_tamper
  std::string fixture_dir = GAUDUCHON_FIXTURE_DIR;

  auto* validate = app.add_subcommand("validate", "check a model file (d^2, Jacobi, J^2, Nijenhuis, metric)");
  validate->add_option("model", model_path, "ModelFile JSON")->required();

  auto* report = app.add_subcommand("report", "torsion summary and Kahler-like residuals per s");
  report->add_option("model", model_path, "ModelFile JSON")->required();
  report->add_option("--s", s_list, "comma list of rationals, e.g. 0,1/2,2/3")->capture_default_str();
  report->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  report->add_option("--tol", tol, "flat / Kahler-like threshold")->capture_default_str();

  auto* lemmas = app.add_subcommand("verify-lemmas", "formal lemma suite on random LCK draws, s symbolic");
  lemmas->add_option("--n", n, "complex dimension (2..4)")->capture_default_str();
  lemmas->add_option("--draws", draws, "number of random draws")->capture_default_str();
  lemmas->add_option("--seed", seed, "RNG seed")->capture_default_str();
  lemmas->add_option("--tamper", tamper)->group("");

  auto* system = app.add_subcommand("verify-system", "coefficient identities, determinant, singular set, ranks");
  system->add_option("--tamper", tamper)->group("");

  auto* cat = app.add_subcommand("catalog", "bundled fixtures and their expected invariants");
  cat->add_option("--fixtures", fixture_dir)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  }

  try {
    if (*validate) return cmd_validate(model_path, std::cout);
    if (*report) return cmd_report(model_path, s_list, format, tol, std::cout);
    if (*lemmas) return cmd_verify_lemmas(n, draws, seed, claims_from_tamper(tamper), std::cout);
    if (*system) return cmd_verify_system(claims_from_tamper(tamper), std::cout);
    if (*cat) return cmd_catalog(fixture_dir, std::cout);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitIo;
}
