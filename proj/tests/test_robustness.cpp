#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qrob/eig.hpp"
#include "qrob/robustness.hpp"

using namespace qrob;

TEST_CASE("random robustness of the Bell state") {
  auto bell = projector(ket_bell());
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto res = random_robustness(bell, m);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(res.gap <= 1e-6 * (1.0 + res.value));
  CHECK_FALSE(res.clamped);
  CHECK(res.model_tag == "exact2q");

  // sigma* reconstruction: (rho + s I/d) / (1+s)
  auto sigma = boundary_state(bell, res.value, maximally_mixed({2, 2}));
  CHECK(trace_distance(sigma, res.boundary_state) <= 1e-7);
  CHECK(membership_check(res.boundary_state, m).inside);

  // witness identity: -Tr(W rho) = dual value
  CHECK(-hs_inner(res.witness.matrix, bell.matrix()) ==
        doctest::Approx(res.dual_value).epsilon(1e-6));
}

TEST_CASE("generalized robustness of the Bell state") {
  auto bell = projector(ket_bell());
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto res = generalized_robustness(bell, m);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-4));
  REQUIRE(res.optimal_noise.has_value());
  // pi* is a state and sigma* = (rho + s pi*)/(1+s) is in the model
  CHECK(trace(res.optimal_noise->matrix().mat()).real() == doctest::Approx(1.0));
  CHECK(min_eigenvalue(res.optimal_noise->matrix()) >= -1e-9);
  CHECK(membership_check(res.boundary_state, m).inside);
  CHECK(max_eigenvalue(res.witness.matrix) <= 1.0 + 1e-9);
}

TEST_CASE("both quantifiers vanish on the maximally mixed state") {
  auto mm = maximally_mixed({2, 2});
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto rr = random_robustness(mm, m);
  CHECK(rr.value == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(rr.clamped);  // dual optimum is negative for an interior state
  CHECK(rr.dual_value < 0.0);
  auto gr = generalized_robustness(mm, m);
  CHECK(gr.value == doctest::Approx(0.0).epsilon(1e-7));
  CHECK_FALSE(gr.optimal_noise.has_value());
}

TEST_CASE("generalized never exceeds random robustness") {
  auto m2 = SeparabilityModel::exact_two_qubit({2, 2});
  auto mi = SeparabilityModel::intersect_ppt({2, 2, 2});
  for (int i = 0; i < 4; ++i) {
    auto rho2 = random_density(4, 1 + i % 4, 50 + i, {2, 2});
    auto rr = random_robustness(rho2, m2);
    auto gr = generalized_robustness(rho2, m2);
    CHECK(gr.value <= rr.value + 1e-8);
  }
  auto ghz = projector(ket_ghz());
  auto rr = random_robustness(ghz, mi);
  auto gr = generalized_robustness(ghz, mi);
  CHECK(gr.value <= rr.value + 1e-8);
}

TEST_CASE("exact2q robustness is invariant under local unitaries") {
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto rho = random_density(4, 2, 314, {2, 2});
  const double base = random_robustness(rho, m).value;
  Rng rng(2718);
  for (int i = 0; i < 20; ++i) {
    auto u = tensor_product(random_unitary(2, rng), random_unitary(2, rng));
    auto rotated = matmul(matmul(u, rho.matrix().mat()), adjoint(u));
    auto rho_u = DensityMatrix::from_matrix(HermitianMatrix::symmetrized(rotated), {2, 2});
    CHECK(random_robustness(rho_u, m).value == doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("mixture model returns per-cut decomposition components") {
  auto ghz = projector(ket_ghz());
  auto m = SeparabilityModel::mixture_ppt({2, 2, 2});
  auto res = generalized_robustness(ghz, m);
  REQUIRE(res.mixture_components.size() == 3);
  ComplexMatrix sum(8);
  for (const auto& [cut, x] : res.mixture_components) {
    CHECK(min_eigenvalue(x) >= -1e-7);
    CHECK(min_eigenvalue(partial_transpose(x, {2, 2, 2}, cut)) >= -1e-7);
    sum += x.mat();
  }
  // components add up to the boundary state
  CHECK(fro_norm(sum - res.boundary_state.matrix().mat()) <= 1e-6);
}

TEST_CASE("boundary_state basics") {
  auto bell = projector(ket_bell());
  auto mm = maximally_mixed({2, 2});
  CHECK(trace_distance(boundary_state(bell, 0.0, mm), bell) <= 1e-12);

  auto far = boundary_state(bell, 1e6, mm);
  CHECK(trace_distance(far, mm) < 2.0 / (1.0 + 1e6));

  // Bell, s = 2, pi = I/4: PT eigenvalue exactly at zero
  auto sigma = boundary_state(bell, 2.0, mm);
  auto cut = enumerate_bipartitions(2)[0];
  CHECK(min_eigenvalue(partial_transpose(sigma, cut)) == doctest::Approx(0.0).epsilon(1e-9));

  CHECK_THROWS_AS(boundary_state(bell, -0.5, mm), InputError);
}

TEST_CASE("pure_state_witness") {
  auto bell = ket_bell();
  auto w = pure_state_witness(bell, 0.5);
  CHECK(hs_inner(w.matrix, projector(bell).matrix()) == doctest::Approx(-0.5));
  CHECK(max_eigenvalue(w.matrix) <= 0.5 + 1e-12);

  auto zzz = basis_ket({2, 2, 2}, 0);
  auto w0 = pure_state_witness(zzz, 1.0);
  CHECK(min_eigenvalue(w0.matrix) >= -1e-12);  // I - |000><000| is PSD
  CHECK(hs_inner(w0.matrix, projector(zzz).matrix()) == doctest::Approx(0.0));

  CHECK_THROWS_AS(pure_state_witness(bell, 0.0), InputError);
  CHECK_THROWS_AS(pure_state_witness(bell, 1.5), InputError);
}

TEST_CASE("seesaw: product state gives lambda 1") {
  auto zzz = basis_ket({2, 2, 2}, 0);
  auto res = pure_lambda_seesaw(zzz, {{{0}, {1}, {2}}}, 8, 5);
  CHECK(res.lambda == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("seesaw: GHZ and W against the symmetric Bloch-angle grid oracle") {
  // For permutation-symmetric states the product overlap is maximized by
  // identical factors; scan |a>^(x3) with a = (cos t/2, e^{i p} sin t/2)
  // on a half-degree grid.
  auto grid_oracle = [](const Ket& psi) {
    double best = 0.0;
    const double deg = 3.14159265358979323846 / 360.0;  // half-degree steps
    for (int it = 0; it <= 360; ++it) {
      const double th = it * deg;
      for (int ip = 0; ip < 720; ++ip) {
        const double ph = ip * deg;
        const cplx a0{std::cos(th / 2.0), 0.0};
        const cplx a1 = std::polar(std::sin(th / 2.0), ph);
        cplx ov = 0.0;
        for (int idx = 0; idx < 8; ++idx) {
          cplx prod{1.0, 0.0};
          for (int b = 0; b < 3; ++b) prod *= ((idx >> (2 - b)) & 1) ? a1 : a0;
          ov += std::conj(prod) * psi.amp(idx);
        }
        best = std::max(best, std::norm(ov));
      }
    }
    return best;
  };

  auto ghz = ket_ghz();
  auto res_ghz = pure_lambda_seesaw(ghz, {{{0}, {1}, {2}}}, 16, 11);
  CHECK(res_ghz.lambda == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(grid_oracle(ghz) == doctest::Approx(0.5).epsilon(1e-4));

  auto wst = ket_w();
  auto res_w = pure_lambda_seesaw(wst, {{{0}, {1}, {2}}}, 16, 13);
  CHECK(res_w.lambda == doctest::Approx(4.0 / 9.0).epsilon(1e-6));
  CHECK(grid_oracle(wst) == doctest::Approx(4.0 / 9.0).epsilon(1e-4));

  // maximizer product reproduces lambda as an overlap
  cplx ov = 0.0;
  {
    Ket prod = res_w.maximizer[0];
    for (std::size_t t = 1; t < res_w.maximizer.size(); ++t)
      prod = ket_tensor(prod, res_w.maximizer[t]);
    ov = ket_inner(prod, wst);
  }
  CHECK(std::norm(ov) == doctest::Approx(res_w.lambda).epsilon(1e-9));
}

TEST_CASE("seesaw over 2-group partitions bounds the full-product value") {
  auto ghz = ket_ghz();
  auto parts2 = partitions_into_groups(3, 2);
  REQUIRE(parts2.size() == 3);
  auto res2 = pure_lambda_seesaw(ghz, parts2, 8, 17);
  auto res3 = pure_lambda_seesaw(ghz, partitions_into_groups(3, 3), 8, 17);
  CHECK(res2.lambda >= res3.lambda - 1e-12);
  // GHZ across any 1|2 cut has Schmidt coefficients (1/sqrt2, 1/sqrt2)
  CHECK(res2.lambda == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("witness audits") {
  // SDP witness for Bell: nonnegative on sampled product states
  auto bell = projector(ket_bell());
  auto m = SeparabilityModel::exact_two_qubit({2, 2});
  auto res = random_robustness(bell, m);
  CHECK(audit_witness(res.witness, m, 10000, 123) >= -1e-8);

  // pure witness from a seesaw lambda: nonnegative on sampled products
  auto wst = ket_w();
  auto lam = pure_lambda_seesaw(wst, {{{0}, {1}, {2}}}, 16, 13);
  auto w = pure_state_witness(wst, lam.lambda);
  auto m3 = SeparabilityModel::intersect_ppt({2, 2, 2});
  CHECK(audit_witness(w, m3, 10000, 321) >= -1e-8);
  // and it detects the W state itself
  CHECK(hs_inner(w.matrix, projector(wst).matrix()) == doctest::Approx(lam.lambda - 1.0));
}

TEST_CASE("partitions_into_groups counts") {
  CHECK(partitions_into_groups(3, 3).size() == 1);
  CHECK(partitions_into_groups(3, 2).size() == 3);
  CHECK(partitions_into_groups(4, 2).size() == 7);
  CHECK(partitions_into_groups(4, 3).size() == 6);
  CHECK_THROWS_AS(partitions_into_groups(3, 4), InputError);
}
