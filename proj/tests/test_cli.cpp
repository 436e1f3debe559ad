#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "blepi/cli.hpp"
#include "blepi/errors.hpp"
#include "blepi/json_io.hpp"

using namespace blepi;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/blepi_test_") + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string epi_datum_text() {
  return io::datum_to_json(epi_datum(0.5)).dump();
}

// strips the volatile line so byte comparisons see only payload
std::string drop_timestamp(std::string text) {
  const auto pos = text.find("\"timestamp\"");
  if (pos == std::string::npos) return text;
  const auto end = text.find('\n', pos);
  text.erase(pos, end - pos + 1);
  return text;
}

}  // namespace

TEST_CASE("solve command on the epi datum") {
  const std::string datum_path = temp_path("epi.json");
  const std::string out_path = temp_path("solve_report.json");
  write_file(datum_path, epi_datum_text());

  cli::RunConfig config;
  config.command = cli::Command::Solve;
  config.datum_path = datum_path;
  config.out_path = out_path;
  CHECK(cli::run(config) == 0);

  const json report = json::parse(read_file(out_path));
  CHECK(report.at("artifact") == "blepi");
  CHECK(report.at("command") == "solve");
  CHECK(report.at("result").at("status") == "converged");
  CHECK(std::abs(report.at("result").at("value").get<double>()) < 1e-6);
  CHECK(report.at("passed") == true);
}

TEST_CASE("validate command reports unbalanced data as ok") {
  const std::string datum_path = temp_path("unbalanced.json");
  const std::string out_path = temp_path("validate_report.json");
  write_file(datum_path, io::datum_to_json(unbalanced_datum()).dump());

  cli::RunConfig config;
  config.command = cli::Command::Validate;
  config.datum_path = datum_path;
  config.out_path = out_path;
  CHECK(cli::run(config) == 0);

  const json report = json::parse(read_file(out_path));
  CHECK(report.at("validation").at("ok") == true);
  CHECK(report.at("validation").at("balance") == 1.0);
}

TEST_CASE("verify-gaussian matches the frozen gap") {
  const std::string datum_path = temp_path("epi_vg.json");
  const std::string out_path = temp_path("vg_report.json");
  write_file(datum_path, epi_datum_text());

  cli::RunConfig config;
  config.command = cli::Command::VerifyGaussian;
  config.datum_path = datum_path;
  config.out_path = out_path;
  config.sigmas_inline = "[[1]],[[4]]";
  config.mg = 0.0;
  CHECK(cli::run(config) == 0);

  const json report = json::parse(read_file(out_path));
  CHECK(report.at("theorem").at("gap").get<double>() ==
        doctest::Approx(0.1115718).epsilon(1e-6));
}

TEST_CASE("dump-datum round-trips doubles bitwise") {
  const std::string datum_path = temp_path("epi_dump_in.json");
  const std::string out_path = temp_path("epi_dump_out.json");
  write_file(datum_path, epi_datum_text());

  cli::RunConfig config;
  config.command = cli::Command::Validate;
  config.datum_path = datum_path;
  config.out_path = out_path;
  config.dump_datum = true;
  CHECK(cli::run(config) == 0);

  const BLDatum original = epi_datum(0.5);
  const BLDatum reparsed = io::datum_from_json(json::parse(read_file(out_path)));
  REQUIRE(reparsed.r == original.r);
  for (int i = 0; i < original.k(); ++i) {
    CHECK(reparsed.c[i] == original.c[i]);
  }
  for (int j = 0; j < original.m(); ++j) {
    CHECK((reparsed.maps[j].array() == original.maps[j].array()).all());
  }
}

TEST_CASE("verify-sampled reports are byte-identical for a fixed seed") {
  const std::string datum_path = temp_path("epi_vs.json");
  const std::string targets_path = temp_path("targets.json");
  write_file(datum_path, epi_datum_text());
  write_file(targets_path,
             R"([{"kind":"exponential","rate":1.0},{"kind":"exponential","rate":1.0}])");

  cli::RunConfig config;
  config.command = cli::Command::VerifySampled;
  config.datum_path = datum_path;
  config.targets_path = targets_path;
  config.samples = 4000;
  config.seed = 3;
  config.mg = 0.0;
  config.emit_timestamp = false;

  const std::string out_a = temp_path("vs_a.json");
  const std::string out_b = temp_path("vs_b.json");
  config.out_path = out_a;
  CHECK(cli::run(config) == 0);
  config.out_path = out_b;
  CHECK(cli::run(config) == 0);
  CHECK(read_file(out_a) == read_file(out_b));
  CHECK(read_file(out_a).find("\"seed\": 3") != std::string::npos);

  // with timestamps on, payloads still agree after dropping the line
  config.emit_timestamp = true;
  config.out_path = out_a;
  CHECK(cli::run(config) == 0);
  config.out_path = out_b;
  CHECK(cli::run(config) == 0);
  CHECK(drop_timestamp(read_file(out_a)) == drop_timestamp(read_file(out_b)));
}

TEST_CASE("lemma1 and audit commands run from files") {
  const std::string datum_path = temp_path("epi_lemma.json");
  const std::string targets_path = temp_path("targets_mix.json");
  write_file(datum_path, epi_datum_text());
  write_file(
      targets_path,
      R"([{"kind":"gaussian_mixture","weights":[0.5,0.5],"means":[-2,2],"sigmas":[1,1]},
          {"kind":"gaussian_mixture","weights":[0.5,0.5],"means":[-2,2],"sigmas":[1,1]}])");

  cli::RunConfig config;
  config.command = cli::Command::Lemma1;
  config.datum_path = datum_path;
  config.targets_path = targets_path;
  config.samples = 4000;
  config.out_path = temp_path("lemma_report.json");
  CHECK(cli::run(config) == 0);
  const json lemma = json::parse(read_file(config.out_path));
  CHECK(lemma.at("lemma1").at("passed") == true);

  config.command = cli::Command::Audit;
  config.out_path = temp_path("audit_report.json");
  CHECK(cli::run(config) == 0);
  const json audit = json::parse(read_file(config.out_path));
  CHECK(audit.at("audit").at("det_ineq_nonneg") == true);
  CHECK(audit.at("audit").at("ab_ok") == true);
}

TEST_CASE("trace csv export") {
  // immediate convergence: header plus a single-digit row count
  const MgResult id_result = solve_mg(identity_datum(2));
  const std::string id_path = temp_path("trace_id.csv");
  CHECK(cli::emit_trace_csv(id_result, id_path));
  const std::string id_text = read_file(id_path);
  CHECK(std::count(id_text.begin(), id_text.end(), '\n') <= 10);

  const MgResult result = solve_mg(epi_datum(0.5));
  const std::string path = temp_path("trace.csv");
  CHECK(cli::emit_trace_csv(result, path));
  const std::string text = read_file(path);
  CHECK(text.rfind("iteration,objective,stationarity\n", 0) == 0);

  // last row's objective is the converged value
  const auto last_line_start = text.find_last_of('\n', text.size() - 2);
  std::istringstream last(text.substr(last_line_start + 1));
  std::string cell;
  std::getline(last, cell, ',');
  std::getline(last, cell, ',');
  CHECK(std::abs(std::stod(cell)) < 1e-6);

  MgResult empty;
  CHECK_THROWS_AS(cli::emit_trace_csv(empty, path), ParameterError);
}

TEST_CASE("input errors exit with status 2") {
  cli::RunConfig config;
  config.command = cli::Command::Solve;
  config.datum_path = temp_path("missing_file.json");
  CHECK(cli::run(config) == 2);

  const std::string bad_path = temp_path("bad_datum.json");
  write_file(bad_path, R"({"r":[1],"c":[1.0],"d":[1.0],"maps":[[[1.0]]],"extra":0})");
  config.datum_path = bad_path;
  CHECK(cli::run(config) == 2);  // unknown key rejected

  write_file(bad_path, R"({"r":[1],"c":[1.0],"d":[1.0]})");
  CHECK(cli::run(config) == 2);  // missing key
}

TEST_CASE("argument parser maps flags onto a run") {
  const std::string datum_path = temp_path("epi_cli.json");
  write_file(datum_path, epi_datum_text());
  const std::string out_path = temp_path("cli_solve.json");

  const char* argv[] = {"blepi",       "solve",          "--datum",
                        datum_path.c_str(), "--out",     out_path.c_str(),
                        "--restarts",  "1"};
  CHECK(cli::main_cli(8, argv) == 0);
  const json report = json::parse(read_file(out_path));
  CHECK(report.at("result").at("status") == "converged");

  const char* bad[] = {"blepi", "solve", "--no-such-flag"};
  CHECK(cli::main_cli(3, bad) == 2);
}
