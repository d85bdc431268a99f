#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "qrob/json_io.hpp"
#include "qrob/svg.hpp"

using namespace qrob;
using nlohmann::json;

TEST_CASE("fmt_double round-trips exactly") {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.gaussian() * std::pow(10.0, static_cast<int>(rng.below(12)) - 6);
    const std::string s = io::fmt_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("matrix and state JSON round trip") {
  auto rho = random_density(8, 3, 2024, {2, 2, 2});
  const json j = io::state_to_json(rho);
  const DensityMatrix back = io::state_from_json(j);
  CHECK(back.dims() == rho.dims());
  for (std::size_t i = 0; i < rho.matrix().mat().re.size(); ++i) {
    CHECK(back.matrix().mat().re[i] == rho.matrix().mat().re[i]);
    CHECK(back.matrix().mat().im[i] == rho.matrix().mat().im[i]);
  }

  // serialized through text and back, still exact
  const json j2 = json::parse(j.dump());
  const DensityMatrix back2 = io::state_from_json(j2);
  for (std::size_t i = 0; i < rho.matrix().mat().re.size(); ++i)
    CHECK(back2.matrix().mat().re[i] == rho.matrix().mat().re[i]);

  // invariant violations rejected
  json bad = j;
  bad["re"][0] = bad["re"][0].get<double>() + 0.5;  // trace off
  CHECK_THROWS_AS(io::state_from_json(bad), InputError);
  json nonherm = j;
  nonherm["im"][1] = 0.7;  // breaks conjugate symmetry
  CHECK_THROWS_AS(io::state_from_json(nonherm), InputError);
}

TEST_CASE("ket JSON round trip and validation") {
  const Ket k = ket_w();
  const Ket back = io::ket_from_json(json::parse(io::ket_to_json(k).dump()));
  for (std::size_t i = 0; i < k.re.size(); ++i) CHECK(back.re[i] == k.re[i]);

  json bad = io::ket_to_json(k);
  bad["re"][1] = 0.9;
  CHECK_THROWS_AS(io::ket_from_json(bad), InputError);

  bool is_pure = false;
  const DensityMatrix rho = io::state_or_ket_from_json(io::ket_to_json(k), &is_pure);
  CHECK(is_pure);
  CHECK(purity(rho) == doctest::Approx(1.0));
}

TEST_CASE("witness JSON round trip keeps certificate structure") {
  auto ghz = projector(ket_ghz());
  auto m = SeparabilityModel::mixture_ppt({2, 2, 2});
  auto res = generalized_robustness(ghz, m);
  const json j = json::parse(io::witness_to_json(res.witness).dump());
  const Witness back = io::witness_from_json(j);
  CHECK(back.normalization == res.witness.normalization);
  CHECK(fro_norm(back.matrix.mat() - res.witness.matrix.mat()) == 0.0);
  REQUIRE(back.certificate.has_value());
  CHECK(back.certificate->mode == CertificateMode::PerPartition);
  CHECK(back.certificate->parts.size() == 3);
}

TEST_CASE("scan CSV schema and lossless parse") {
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto scan = scan_family(family_werner(), Quantifier::Random, m, 11);
  const std::string csv = io::scan_csv(scan);
  REQUIRE(csv.rfind("q,quantifier,model,value,dual_value,gap,status,witness_jump\n", 0) == 0);

  // parse rows back; numeric fields must round-trip bit-exactly
  std::size_t pos = csv.find('\n') + 1;
  int row = 0;
  while (pos < csv.size()) {
    const std::size_t end = csv.find('\n', pos);
    const std::string line = csv.substr(pos, end - pos);
    pos = end + 1;
    std::vector<std::string> cells;
    std::size_t c = 0;
    while (true) {
      const std::size_t comma = line.find(',', c);
      cells.push_back(line.substr(c, comma - c));
      if (comma == std::string::npos) break;
      c = comma + 1;
    }
    REQUIRE(cells.size() == 8);
    CHECK(std::strtod(cells[0].c_str(), nullptr) == scan.grid[row]);
    CHECK(cells[1] == "rr");
    CHECK(cells[2] == "exact2q");
    CHECK(std::strtod(cells[3].c_str(), nullptr) == scan.curve[row].result.value);
    CHECK(std::strtod(cells[7].c_str(), nullptr) == scan.witness_step[row]);
    ++row;
  }
  CHECK(row == 11);
}

TEST_CASE("experiment CSV schema") {
  std::vector<ExperimentRow> rows(2);
  rows[0] = {0.0, 0.25, 0.01, 0.24, 100, 7};
  rows[1] = {1.0, 0.5, 0.02, 0.51, 100, 8};
  const std::string csv = io::experiment_csv(rows);
  CHECK(csv.rfind("q,estimate,stderr,truth,N,seed\n", 0) == 0);
  CHECK(csv.find("1,0.5,0.02,0.51,100,8\n") != std::string::npos);
}

TEST_CASE("counts record JSON lines") {
  auto bell = projector(ket_bell());
  auto rec = simulate_counts(bell, MeasurementSetting{{PauliAxis::X, PauliAxis::Z}}, 500, 3);
  const CountsRecord back = io::counts_from_json(json::parse(io::counts_to_json(rec).dump()));
  CHECK(back.setting.label() == "XZ");
  CHECK(back.shots == 500);
  for (int o = 0; o < 4; ++o) CHECK(back.counts[o] == rec.counts[o]);

  json bad = io::counts_to_json(rec);
  bad["counts"][0] = bad["counts"][0].get<double>() + 1.0;
  CHECK_THROWS_AS(io::counts_from_json(bad), InputError);
}

TEST_CASE("problem dump round trip solves identically") {
  auto bell = projector(ket_bell());
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto prog = build_rr_dual(bell, m);
  const sdp::Problem back = io::problem_from_json(json::parse(io::problem_to_json(prog.problem).dump()));
  auto s1 = sdp::solve(prog.problem);
  auto s2 = sdp::solve(back);
  CHECK(s1.primal_obj == s2.primal_obj);
  CHECK(s1.dual_obj == s2.dual_obj);
}

TEST_CASE("family file round trip") {
  json fam;
  fam["name"] = "two-point";
  fam["entries"] = json::array();
  fam["entries"].push_back(
      json{{"q", 0.0}, {"state", io::state_to_json(maximally_mixed({2, 2}))}});
  fam["entries"].push_back(
      json{{"q", 1.0}, {"state", io::state_to_json(projector(ket_bell()))}});
  const StateFamily f = io::family_from_json(fam);
  CHECK(f.dims == std::vector<int>{2, 2});
  CHECK(trace_distance(f.at(0.0), maximally_mixed({2, 2})) <= 1e-12);
  CHECK(trace_distance(f.at(1.0), projector(ket_bell())) <= 1e-12);
  // interpolation halfway
  CHECK(trace_distance(f.at(0.5), white_noise_mix(projector(ket_bell()), 0.5)) <= 1e-12);
}

TEST_CASE("svg renderer basics") {
  svg::Series s;
  s.x = {0.0, 1.0};
  s.y = {0.5, 0.7};
  const std::string one = svg::render({s}, {}, "t");
  // exactly one polyline
  std::size_t count = 0, pos = 0;
  while ((pos = one.find("<polyline", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 1);
  CHECK(one.find("<svg") == 0);
  CHECK(one.find("</svg>") != std::string::npos);

  const std::string marked = svg::render({s}, {0.4}, "t");
  CHECK(marked.find("kink-marker") != std::string::npos);

  // deterministic bytes
  CHECK(svg::render({s}, {0.4}, "t") == marked);

  svg::Series tiny;
  tiny.x = {0.0};
  tiny.y = {1.0};
  CHECK_THROWS_AS(svg::render({tiny}, {}, "t"), InputError);
}

TEST_CASE("golden files reproduce") {
  const std::string dir = QROB_GOLDEN_DIR;

  // seeded random state, bit-exact against the recorded file
  auto rho = random_density(4, 2, 42, {2, 2});
  const json want = json::parse(io::read_file(dir + "/random_density_seed42.json"));
  const DensityMatrix golden = io::state_from_json(want);
  for (std::size_t i = 0; i < rho.matrix().mat().re.size(); ++i) {
    CHECK(rho.matrix().mat().re[i] == golden.matrix().mat().re[i]);
    CHECK(rho.matrix().mat().im[i] == golden.matrix().mat().im[i]);
  }

  // certificate-validation report corpus
  const json corpus = json::parse(io::read_file(dir + "/cert_reports.json"));
  for (const auto& item : corpus) {
    const sdp::Problem p = io::problem_from_json(item.at("problem"));
    const auto sol = sdp::solve(p);
    const json rep = io::cert_report_to_json(sdp::validate_certificates(p, sol));
    CHECK(rep == item.at("report"));
  }

  // synthetic |q - 0.5| scan plot
  svg::Series s;
  for (int i = 0; i <= 100; ++i) {
    const double q = i / 100.0;
    s.x.push_back(q);
    s.y.push_back(std::abs(q - 0.5));
  }
  s.label = "synthetic";
  const std::string svg_text = svg::render({s}, {0.5}, "synthetic vee scan");
  CHECK(svg_text == io::read_file(dir + "/vee_scan.svg"));
}
