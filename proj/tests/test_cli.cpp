#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qrob/json_io.hpp"

using namespace qrob;
using nlohmann::json;

namespace {

// All scratch files land in a dedicated directory no matter where the
// binary is launched from.
const bool g_scratch = [] {
  std::filesystem::create_directories("cli_scratch");
  std::filesystem::current_path("cli_scratch");
  return true;
}();

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string out_file = "cli_stdout.tmp";
  const std::string cmd = std::string(QROB_CLI_PATH) + " " + args + " > " + out_file + " 2>cli_stderr.tmp";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream in(out_file, std::ios::binary);
  r.out = std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return r;
}

void write_bell_file(const std::string& path) {
  io::write_file_atomic(path, io::state_to_json(projector(ket_bell())).dump() + "\n");
}

}  // namespace

TEST_CASE("robustness command values and exit codes") {
  write_bell_file("bell.json");
  io::write_file_atomic("mixed.json", io::state_to_json(maximally_mixed({2, 2})).dump() + "\n");

  auto r = run("robustness --state bell.json --quantifier rr --model exact2q");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("value").get<double>() == doctest::Approx(2.0).epsilon(1e-5));

  r = run("robustness --state mixed.json");
  CHECK(r.exit_code == 0);
  j = json::parse(r.out);
  CHECK(j.at("value").get<double>() == doctest::Approx(0.0).epsilon(1e-7));

  r = run("robustness --state bell.json --quantifier gr");
  CHECK(r.exit_code == 0);
  j = json::parse(r.out);
  CHECK(j.at("value").get<double>() == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("exit code matrix: 0 success, 1 input error, 2 numerical failure") {
  write_bell_file("bell.json");
  CHECK(run("robustness --state bell.json").exit_code == 0);

  // input/validation errors
  CHECK(run("robustness --state nonexistent.json").exit_code == 1);
  io::write_file_atomic("garbage.json", "{not json");
  CHECK(run("robustness --state garbage.json").exit_code == 1);
  CHECK(run("tomo --family werner --shots -1").exit_code == 1);
  CHECK(run("scan --family no-such-family").exit_code == 1);
  CHECK(run("robustness --state bell.json --quantifier zz").exit_code == 1);

  // numerical failure: solver starved of iterations
  CHECK(run("robustness --state bell.json --max-iter 2").exit_code == 2);
}

TEST_CASE("scan command: CSV, kink JSON, svg") {
  auto r = run("scan --family werner --grid 21 --out scan_test.csv --svg scan_test.svg");
  CHECK(r.exit_code == 0);
  const std::string csv = io::read_file("scan_test.csv");
  CHECK(csv.rfind("q,quantifier,model,value,dual_value,gap,status,witness_jump\n", 0) == 0);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 22);  // header + 21 rows

  const json kinks = json::parse(io::read_file("scan_test.csv.kinks.json"));
  CHECK(kinks.at("kinks").is_array());
  CHECK(kinks.at("phases").size() == 2);

  const std::string svg = io::read_file("scan_test.svg");
  CHECK(svg.find("<polyline") != std::string::npos);

  // constant family: all-zero values
  r = run("scan --family constant-mixed --grid 11 --out const.csv");
  CHECK(r.exit_code == 0);
  const json ck = json::parse(io::read_file("const.csv.kinks.json"));
  CHECK(ck.at("kinks").empty());
}

TEST_CASE("witness command: pure and SDP modes") {
  io::write_file_atomic("ghz.ket.json", io::ket_to_json(ket_ghz()).dump() + "\n");
  auto r = run("witness --state ghz.ket.json --seed 5");
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j.at("mode") == "pure-analytic");
  CHECK(j.at("lambda").get<double>() == doctest::Approx(0.5).epsilon(1e-6));

  io::write_file_atomic("zzz.ket.json", io::ket_to_json(basis_ket({2, 2, 2}, 0)).dump() + "\n");
  r = run("witness --state zzz.ket.json --seed 5");
  CHECK(r.exit_code == 0);
  j = json::parse(r.out);
  CHECK(j.at("lambda").get<double>() == doctest::Approx(1.0).epsilon(1e-9));

  write_bell_file("bell.json");
  io::write_file_atomic("bellmix.json",
                        io::state_to_json(white_noise_mix(projector(ket_bell()), 0.9)).dump());
  r = run("witness --state bellmix.json --quantifier rr");
  CHECK(r.exit_code == 0);
  j = json::parse(r.out);
  CHECK(j.at("mode") == "sdp-dual");
  const Witness w = io::witness_from_json(j.at("witness"));
  CHECK(trace(w.matrix.mat()).real() == doctest::Approx(4.0).epsilon(1e-8));
}

TEST_CASE("tomo command: exact mode matches truth; seeded runs are byte-identical") {
  auto r = run("tomo --family werner --grid 7 --shots 0 --seed 3 --out tomo_a.csv");
  CHECK(r.exit_code == 0);
  const std::string a = io::read_file("tomo_a.csv");
  CHECK(a.rfind("q,estimate,stderr,truth,N,seed\n", 0) == 0);

  // estimate equals truth in exact mode
  std::size_t pos = a.find('\n') + 1;
  while (pos < a.size()) {
    const std::size_t end = a.find('\n', pos);
    std::string line = a.substr(pos, end - pos);
    pos = end + 1;
    double q, est, se, truth;
    long n;
    unsigned long long seed;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%ld,%llu", &q, &est, &se, &truth, &n,
                        &seed) == 6);
    CHECK(std::abs(est - truth) <= 1e-8);
  }

  r = run("tomo --family werner --grid 5 --shots 10000 --seed 7 --out tomo_b.csv --svg tomo_b.svg");
  CHECK(r.exit_code == 0);
  r = run("tomo --family werner --grid 5 --shots 10000 --seed 7 --out tomo_c.csv");
  CHECK(r.exit_code == 0);
  CHECK(io::read_file("tomo_b.csv") == io::read_file("tomo_c.csv"));
  CHECK(io::read_file("tomo_b.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("scan determinism across repeated runs") {
  auto r1 = run("scan --family werner --grid 11 --seed 9 --out det_a.csv");
  auto r2 = run("scan --family werner --grid 11 --seed 9 --out det_b.csv");
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  CHECK(io::read_file("det_a.csv") == io::read_file("det_b.csv"));
  CHECK(io::read_file("det_a.csv.kinks.json") == io::read_file("det_b.csv.kinks.json"));
}
