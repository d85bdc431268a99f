#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qrob/eig.hpp"
#include "qrob/tomo.hpp"

using namespace qrob;

namespace {

std::vector<CountsRecord> measure_all(const DensityMatrix& rho, std::int64_t shots,
                                      std::uint64_t seed) {
  std::vector<CountsRecord> records;
  const auto settings = all_settings(rho.parties());
  for (std::size_t s = 0; s < settings.size(); ++s)
    records.push_back(simulate_counts(rho, settings[s], shots, Rng::derive(seed, s)));
  return records;
}

}  // namespace

TEST_CASE("simulate_counts basics") {
  // |0>: Z measurement concentrates on outcome 0
  auto zero = projector(basis_ket({2}, 0));
  MeasurementSetting z{{PauliAxis::Z}};
  auto rec = simulate_counts(zero, z, 1000, 7);
  CHECK(rec.counts[0] == doctest::Approx(1000.0));
  CHECK(rec.counts[1] == doctest::Approx(0.0));

  // maximally mixed qubit in exact mode: uniform probabilities
  auto mm = maximally_mixed({2});
  for (auto axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
    auto ex = simulate_counts(mm, MeasurementSetting{{axis}}, 0, 1);
    CHECK(ex.counts[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ex.counts[1] == doctest::Approx(0.5).epsilon(1e-12));
  }

  // Bell in the ZZ setting, exact mode: {1/2, 0, 0, 1/2}
  auto bell = projector(ket_bell());
  auto ez = simulate_counts(bell, MeasurementSetting{{PauliAxis::Z, PauliAxis::Z}}, 0, 1);
  CHECK(ez.counts[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ez.counts[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ez.counts[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ez.counts[3] == doctest::Approx(0.5).epsilon(1e-12));

  // counts sum to N; reproducible per seed
  auto r1 = simulate_counts(bell, MeasurementSetting{{PauliAxis::X, PauliAxis::Y}}, 5000, 99);
  auto r2 = simulate_counts(bell, MeasurementSetting{{PauliAxis::X, PauliAxis::Y}}, 5000, 99);
  double sum = 0.0;
  for (double c : r1.counts) sum += c;
  CHECK(sum == doctest::Approx(5000.0));
  for (int o = 0; o < 4; ++o) CHECK(r1.counts[o] == r2.counts[o]);

  // non-qubit input rejected
  auto qutrit = maximally_mixed({3});
  CHECK_THROWS_AS(simulate_counts(qutrit, z, 10, 1), InputError);
}

TEST_CASE("pauli expectation estimation in exact mode equals traces") {
  auto rho = random_density(8, 3, 77, {2, 2, 2});
  auto table = estimate_pauli_expectations(measure_all(rho, 0, 0));
  for (int p = 0; p < 64; ++p) {
    const double expect =
        hs_inner(rho.matrix(), HermitianMatrix::symmetrized(pauli_string_matrix(3, p)));
    CHECK(std::abs(table.value[p] - expect) <= 1e-12);
    CHECK(table.std_err[p] == 0.0);
  }
}

TEST_CASE("Bell correlators and standard-error bound") {
  auto bell = projector(ket_bell());
  auto table = estimate_pauli_expectations(measure_all(bell, 0, 0));
  // base-4 indices: ZZ = 3*4+3 = 15, XX = 1*4+1 = 5, YY = 2*4+2 = 10
  CHECK(table.value[15] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(table.value[5] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(table.value[10] == doctest::Approx(-1.0).epsilon(1e-12));

  auto noisy = estimate_pauli_expectations(measure_all(bell, 10000, 5));
  for (std::size_t p = 1; p < noisy.size(); ++p) {
    CHECK(noisy.std_err[p] >= 0.0);
    CHECK(noisy.std_err[p] <= 1.1 / std::sqrt(10000.0));
  }
}

TEST_CASE("reconstruct: exact mode is an identity") {
  auto rho = random_density(8, 2, 123, {2, 2, 2});
  auto rec = reconstruct(estimate_pauli_expectations(measure_all(rho, 0, 0)));
  CHECK(trace_distance(rec.estimate, rho) <= 1e-10);
  CHECK(fro_norm(rec.raw.mat() - rho.matrix().mat()) <= 1e-12);

  auto mm = maximally_mixed({2, 2});
  auto rec2 = reconstruct(estimate_pauli_expectations(measure_all(mm, 0, 0)));
  CHECK(trace_distance(rec2.estimate, mm) <= 1e-12);

  // incomplete table rejected
  PauliTable bad;
  bad.qubits = 2;
  bad.value.assign(10, 0.0);
  bad.std_err.assign(10, 0.0);
  CHECK_THROWS_AS(reconstruct(bad), InputError);
}

TEST_CASE("reconstruct at finite shots keeps the state invariants and fidelity") {
  auto bell = projector(ket_bell());
  auto rec = reconstruct(estimate_pauli_expectations(measure_all(bell, 10000, 7)));
  CHECK(trace(rec.estimate.matrix().mat()).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_eigenvalue(rec.estimate.matrix()) >= -1e-10);
  CHECK(fidelity_with_pure(ket_bell(), rec.estimate) >= 0.98);
}

TEST_CASE("witness_expectation: exact mode equals the trace formula") {
  auto bell = projector(ket_bell());
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto fit = random_robustness(bell, m);
  auto table = estimate_pauli_expectations(measure_all(bell, 0, 0));
  auto we = witness_expectation(table, fit.witness);
  CHECK(we.value == doctest::Approx(hs_inner(fit.witness.matrix, bell.matrix())).epsilon(1e-12));
  CHECK(we.value == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(we.detected);
  CHECK(we.std_err == 0.0);
}

TEST_CASE("witness estimate error scales like 1/sqrt(N)") {
  // A noisy Bell state: its correlators are strictly inside (-1, 1), so the
  // parity estimates carry genuine shot noise. (The pure Bell state's own
  // witness has deterministic +-1 parities and zero sampling error.)
  auto rho = white_noise_mix(projector(ket_bell()), 0.85);
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto fit = random_robustness(rho, m);
  const double truth = hs_inner(fit.witness.matrix, rho.matrix());

  std::vector<double> logn, logerr;
  for (std::int64_t n : {100, 1000, 10000, 100000}) {
    double err = 0.0;
    const int reps = 24;
    for (int r = 0; r < reps; ++r) {
      auto table = estimate_pauli_expectations(measure_all(rho, n, 1000 + r));
      err += std::abs(witness_expectation(table, fit.witness).value - truth);
    }
    logn.push_back(std::log(static_cast<double>(n)));
    logerr.push_back(std::log(err / reps));
  }
  // least-squares slope
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    mx += logn[i];
    my += logerr[i];
  }
  mx /= logn.size();
  my /= logn.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    sxx += (logn[i] - mx) * (logn[i] - mx);
    sxy += (logn[i] - mx) * (logerr[i] - my);
  }
  const double slope = sxy / sxx;
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("end_to_end_experiment in exact mode reproduces the scan curve") {
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto rows = end_to_end_experiment(family_werner(), Quantifier::Random, m, 11, 0, 42);
  for (const auto& row : rows) {
    CHECK(std::isfinite(row.estimate));
    // no-noise path: the measured functional equals the truth column
    CHECK(std::abs(row.estimate - row.truth) <= 1e-8);
    // and both match the scan-level value within the cross tolerance
    CHECK(row.truth ==
          doctest::Approx(std::max(0.0, 3.0 * row.q - 1.0)).epsilon(1e-5));
  }
  // determinism across runs
  auto rows2 = end_to_end_experiment(family_werner(), Quantifier::Random, m, 11, 0, 42);
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(rows[i].estimate == rows2[i].estimate);
}

TEST_CASE("end_to_end GHZ/W deviations are statistically consistent with the error bars") {
  auto m = SeparabilityModel::mixture_ppt({2, 2, 2});
  double total_dev = 0.0, total_se = 0.0;
  int n = 0;
  for (std::uint64_t seed : {401u, 402u}) {
    const auto rows = end_to_end_experiment(family_ghz_w(), Quantifier::Generalized, m, 5,
                                            10000, seed);
    for (const auto& row : rows) {
      REQUIRE(std::isfinite(row.estimate));
      total_dev += std::abs(row.estimate - row.truth);
      total_se += row.std_err;
      ++n;
    }
  }
  CHECK(total_dev / n <= 3.0 * (total_se / n));
}

TEST_CASE("end_to_end_experiment at finite shots stays near the truth") {
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto rows = end_to_end_experiment(family_werner(), Quantifier::Random, m, 9, 20000, 11);
  int informative = 0;
  for (const auto& row : rows) {
    REQUIRE(std::isfinite(row.estimate));
    if (row.truth > 0.05) {
      ++informative;
      CHECK(std::abs(row.estimate - row.truth) <= std::max(5.0 * row.std_err, 0.05));
    }
  }
  CHECK(informative >= 4);
}
