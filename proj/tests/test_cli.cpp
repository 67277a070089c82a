#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string out_file =
      (fs::temp_directory_path() / "dn_cli_out.txt").string();
  const std::string cmd =
      std::string(DN_BINARY) + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::stringstream buf;
  buf << in.rdbuf();
  result.output = buf.str();
  return result;
}

std::string fixture(const std::string& name) {
  return std::string(DN_FIXTURES) + "/" + name;
}

json parse_report(const std::string& text) { return json::parse(text); }

// Timing fields are the one legitimate source of nondeterminism.
json strip_timings(json report) {
  if (report.contains("provenance"))
    report["provenance"].erase("timings_ms");
  return report;
}

}  // namespace

TEST_CASE("compute emits the P3 DN matrix") {
  const auto result = run("compute --form " + fixture("p3.form.json"));
  REQUIRE(result.exit_code == 0);
  const json report = parse_report(result.output);
  CHECK(report["results"]["S"]["rows"][0][0].get<double>() ==
        doctest::Approx(0.5));
  CHECK(report["results"]["S"]["rows"][0][1].get<double>() ==
        doctest::Approx(-0.5));
  CHECK(report["results"]["markovian"].get<bool>());
}

TEST_CASE("csv format carries the boundary header") {
  const auto result =
      run("--format csv compute --form " + fixture("p3.form.json"));
  REQUIRE(result.exit_code == 0);
  CHECK(result.output.find("a,c") != std::string::npos);
  CHECK(result.output.find("# S") != std::string::npos);
}

TEST_CASE("malformed input exits 2 with the field path") {
  const auto tmp = fs::temp_directory_path() / "bad_form.json";
  std::ofstream(tmp) << R"({"vertices": ["a"], "edges": [],
    "m": {"a": -1.0}, "boundary": ["a"], "mu": {"a": 1.0}})";
  const auto result = run("compute --form " + tmp.string());
  CHECK(result.exit_code == 2);
  CHECK(result.output.find("m.a") != std::string::npos);

  const auto missing = run("compute --form /nonexistent/f.json");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("perturb reports identities and certificates") {
  const auto result = run("perturb --form " + fixture("p3.form.json") +
                          " --kappa " + fixture("p3.kappa.json"));
  REQUIRE(result.exit_code == 0);
  const json report = parse_report(result.output);
  CHECK(report["results"]["threshold"]["passes"].get<bool>());
  CHECK(report["results"]["trace_identity"]["pass"].get<bool>());
  CHECK(report["results"]["S_kappa"]["rows"][0][1].get<double>() ==
        doctest::Approx(-1.0));
  CHECK(report["results"].contains("form_bound"));
}

TEST_CASE("spectrum and htransform agree on the ground-state pair") {
  const auto spec = run("spectrum --form " + fixture("p3.form.json") +
                        " --kappa " + fixture("p3.kappa.json"));
  REQUIRE(spec.exit_code == 0);
  const json sreport = parse_report(spec.output);
  CHECK(sreport["results"]["eigenvalues"][0].get<double>() ==
        doctest::Approx(-1.0));

  const auto ht = run("htransform --form " + fixture("p3.form.json") +
                      " --kappa " + fixture("p3.kappa.json") +
                      " --h ground --alpha auto");
  REQUIRE(ht.exit_code == 0);
  const json hreport = parse_report(ht.output);
  CHECK(hreport["results"]["trichotomy"]["recurrent"].get<bool>());
  CHECK(hreport["results"]["trichotomy"]["consistent"].get<bool>());
}

TEST_CASE("disk subcommand lists the Fourier table") {
  const auto result = run("disk --lambda 0 --modes 4");
  REQUIRE(result.exit_code == 0);
  const json report = parse_report(result.output);
  CHECK(report["results"]["modes"][2]["mu"].get<double>() ==
        doctest::Approx(1.0));
  CHECK(report["results"]["first_dirichlet_eigenvalue"].get<double>() ==
        doctest::Approx(-5.783186).epsilon(1e-6));
}

TEST_CASE("simulate trace passes its own five-sigma gate") {
  const auto result = run("simulate --mode trace --form " +
                          fixture("p3.form.json") +
                          " --samples 20000 --seed 7 --workers 2");
  CHECK(result.exit_code == 0);
}

TEST_CASE("calderon subcommand round-trips a fixture potential") {
  // Observed DN data of P3 with V = -1 at the midpoint (closed form).
  const auto data = fs::temp_directory_path() / "obs_matrix.csv";
  std::ofstream(data) << "a,c\n0,-1\n-1,0\n";

  const auto result = run("calderon --base " + fixture("p3.form.json") +
                          " --data " + data.string() + " --support b");
  REQUIRE(result.exit_code == 0);
  const json report = parse_report(result.output);
  CHECK(report["results"]["converged"].get<bool>());
  CHECK(report["results"]["potential"]["values"][0].get<double>() ==
        doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("verify-all over the shipped fixtures") {
  const auto result = run("verify-all --suite " + std::string(DN_FIXTURES) +
                          " --instances 10 --mc-samples 20000 --workers 2");
  CHECK(result.exit_code == 0);
}

TEST_CASE("verify-all flags a planted bad expectation with exit 4") {
  const auto dir = fs::temp_directory_path() / "dn_bad_suite";
  fs::create_directories(dir);
  fs::copy_file(fixture("p3.form.json"), dir / "p3.form.json",
                fs::copy_options::overwrite_existing);
  // Positive off-diagonal planted in the expected trace matrix.
  std::ofstream(dir / "p3.expected.json")
      << R"({"S": {"ids": ["a","c"], "rows": [[0.5, 0.5], [0.5, 0.5]]}})";
  const auto result =
      run("verify-all --suite " + dir.string() + " --instances 2");
  CHECK(result.exit_code == 4);
  CHECK(result.output.find("expected-dn-matrix") != std::string::npos);
}

TEST_CASE("verify-all on an empty directory exits 2") {
  const auto dir = fs::temp_directory_path() / "dn_empty_suite";
  fs::create_directories(dir);
  const auto result = run("verify-all --suite " + dir.string());
  CHECK(result.exit_code == 2);
}

TEST_CASE("reports are byte-identical for identical configs") {
  const std::string args = "spectrum --form " + fixture("p3.form.json");
  const auto a = run(args);
  const auto b = run(args);
  CHECK(strip_timings(parse_report(a.output)).dump() ==
        strip_timings(parse_report(b.output)).dump());
}

TEST_CASE("environment variables mirror the flags") {
  const std::string cmd = std::string("DN_FORMAT=csv ") + DN_BINARY +
                          " compute --form " + fixture("p3.form.json") +
                          " > /tmp/dn_env_out.txt 2>&1";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  std::ifstream in("/tmp/dn_env_out.txt");
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().find("# S") != std::string::npos);
}
