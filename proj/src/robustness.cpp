#include "qrob/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "qrob/eig.hpp"
#include "qrob/kernels.hpp"

namespace qrob {

const char* quantifier_name(Quantifier q) {
  return q == Quantifier::Random ? "rr" : "gr";
}

namespace {

sdp::Solution solve_or_throw(const sdp::Problem& p, const sdp::SolveOptions& opt,
                             const char* what) {
  auto sol = sdp::solve(p, opt);
  if (sol.status != sdp::Status::Optimal)
    throw NumericalError(std::string(what) + ": solver status " +
                         sdp::status_name(sol.status) + " (" + sol.message + ")");
  return sol;
}

RobustnessResult assemble(Quantifier quant, const DensityMatrix& rho,
                          const SeparabilityModel& m, const ConeProgram& prog_p,
                          const sdp::Solution& sol_p, const ConeProgram& prog_d,
                          const sdp::Solution& sol_d, const RobustnessOptions& opt) {
  RobustnessResult res;
  res.quantifier = quant;
  res.model_tag = m.tag();
  res.primal_value = prog_p.program_value(sol_p);
  res.dual_value = prog_d.program_value(sol_d);
  res.primal_iterations = sol_p.iterations;
  res.dual_iterations = sol_d.iterations;
  res.status = sdp::Status::Optimal;

  double primal_clamped = std::max(0.0, res.primal_value);
  const double dual_clamped = std::max(0.0, res.dual_value);
  res.clamped = res.primal_value < 0.0 || res.dual_value < 0.0;
  // A nonpositive dual optimum certifies the state inside the model; the
  // state-side interior-point tail is then pure noise, so the value is 0.
  if (res.dual_value <= 1e-9 && res.primal_value <= 1e-6) {
    primal_clamped = 0.0;
    res.clamped = true;
  }
  res.value = primal_clamped;
  res.gap = std::abs(primal_clamped - dual_clamped);
  if (res.gap > opt.gap_tol * (1.0 + std::abs(res.value)))
    throw NumericalError("primal/dual cross-validation gap " + std::to_string(res.gap) +
                         " exceeds tolerance");

  res.witness = extract_witness(sol_d, prog_d);

  // Boundary state and optimal noise.
  const double s = res.value;
  if (quant == Quantifier::Random) {
    res.boundary_state = boundary_state(rho, s, maximally_mixed(rho.dims()));
  } else {
    const HermitianMatrix pi_raw =
        HermitianMatrix::symmetrized(sdp::extract_hermitian(sol_p.X[prog_p.pi_block], m.dim()));
    const double tr = trace(pi_raw.mat()).real();
    if (s > 1e-7 && tr > 1e-12) {
      auto noise = DensityMatrix::unchecked(
          psd_project(herm_scale(1.0 / tr, pi_raw), true), rho.dims());
      res.optimal_noise = noise;
      res.boundary_state = boundary_state(rho, s, noise);
    } else {
      res.optimal_noise.reset();
      res.boundary_state = rho;
    }
  }

  if (m.kind == ModelKind::MixturePPT) {
    // per-cut components of sigma* = sum_M X_M / (1+s), for inspection
    const double scale = 1.0 / (1.0 + s);
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      const auto x = HermitianMatrix::symmetrized(
          sdp::extract_hermitian(sol_p.X[prog_p.x_blocks[t]], m.dim()));
      res.mixture_components.push_back({m.cuts[t], herm_scale(scale, x)});
    }
  }

  if (opt.validate_boundary) {
    const auto mem = membership_check(res.boundary_state, m, 1e-6);
    if (!mem.inside)
      throw NumericalError("boundary state failed membership check: violation " +
                           std::to_string(mem.violation));
  }
  return res;
}

}  // namespace

RobustnessResult random_robustness(const DensityMatrix& rho, const SeparabilityModel& m,
                                   const RobustnessOptions& opt) {
  const auto prog_p = build_rr_primal(rho, m);
  const auto sol_p = solve_or_throw(prog_p.problem, opt.sdp, "random robustness primal");
  const auto prog_d = build_rr_dual(rho, m);
  const auto sol_d = solve_or_throw(prog_d.problem, opt.sdp, "random robustness dual");
  return assemble(Quantifier::Random, rho, m, prog_p, sol_p, prog_d, sol_d, opt);
}

RobustnessResult generalized_robustness(const DensityMatrix& rho, const SeparabilityModel& m,
                                        const RobustnessOptions& opt) {
  const auto prog_p = build_gr_primal(rho, m);
  const auto sol_p = solve_or_throw(prog_p.problem, opt.sdp, "generalized robustness primal");
  const auto prog_d = build_gr_dual(rho, m);
  const auto sol_d = solve_or_throw(prog_d.problem, opt.sdp, "generalized robustness dual");
  return assemble(Quantifier::Generalized, rho, m, prog_p, sol_p, prog_d, sol_d, opt);
}

DensityMatrix boundary_state(const DensityMatrix& rho, double s, const DensityMatrix& pi) {
  if (s < 0.0) throw InputError("boundary_state: s must be nonnegative");
  if (pi.dim() != rho.dim()) throw InputError("boundary_state: dimension mismatch");
  ComplexMatrix m = ComplexMatrix(rho.matrix().mat());
  m += s * ComplexMatrix(pi.matrix().mat());
  m *= 1.0 / (1.0 + s);
  return DensityMatrix::unchecked(HermitianMatrix::symmetrized(m), rho.dims());
}

Witness pure_state_witness(const Ket& psi, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw InputError("pure_state_witness: lambda must lie in (0, 1]");
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw InputError("pure_state_witness: ket not normalized");
  ComplexMatrix m = ComplexMatrix::identity(psi.dim());
  m *= lambda;
  m -= ComplexMatrix(projector(psi).matrix().mat());
  Witness w;
  w.matrix = HermitianMatrix::symmetrized(m);
  w.normalization = WitnessNormalization::BoundedByIdentity;
  return w;
}

namespace {

// One seesaw pass for a fixed grouping. Returns the converged overlap and
// leaves the factor kets in `factors`.
double seesaw_once(const Ket& psi, const std::vector<std::vector<int>>& groups,
                   std::vector<Ket>& factors, Rng& rng) {
  const auto& dims = psi.dims;
  const int n = static_cast<int>(dims.size());
  const int d = psi.dim();

  factors.clear();
  for (const auto& g : groups) {
    std::vector<int> gd;
    for (int p : g) gd.push_back(dims[p]);
    factors.push_back(random_ket(gd, rng));
  }

  std::vector<int> digits(n);
  auto group_index = [&](const std::vector<int>& g) {
    int gi = 0;
    for (int p : g) gi = gi * dims[p] + digits[p];
    return gi;
  };

  double overlap = 0.0;
  for (int it = 0; it < 500; ++it) {
    double latest = overlap;
    for (std::size_t t = 0; t < groups.size(); ++t) {
      // w[j] = sum over the full index with group-t digits fixed to j of
      // psi[idx] * prod_{u != t} conj(factor_u[idx_u])
      const int gd = factors[t].dim();
      std::vector<cplx> w(gd, 0.0);
      for (int idx = 0; idx < d; ++idx) {
        int rem = idx;
        for (int k = n - 1; k >= 0; --k) {
          digits[k] = rem % dims[k];
          rem /= dims[k];
        }
        cplx coef = psi.amp(idx);
        if (coef == cplx{0.0, 0.0}) continue;
        for (std::size_t u = 0; u < groups.size(); ++u) {
          if (u == t) continue;
          coef *= std::conj(factors[u].amp(group_index(groups[u])));
        }
        w[group_index(groups[t])] += coef;
      }
      double nn = 0.0;
      for (const auto& v : w) nn += std::norm(v);
      latest = nn;  // |<product|psi>|^2 with the optimal factor t
      if (nn <= 1e-300) break;
      const double inv = 1.0 / std::sqrt(nn);
      for (int j = 0; j < gd; ++j) {
        factors[t].re[j] = w[j].real() * inv;
        factors[t].im[j] = w[j].imag() * inv;
      }
    }
    if (latest < overlap - 1e-12)
      throw NumericalError("seesaw overlap decreased; this should be impossible");
    if (latest - overlap < 1e-12) {
      overlap = latest;
      break;
    }
    overlap = latest;
  }
  return overlap;
}

}  // namespace

PureLambda pure_lambda_seesaw(const Ket& psi,
                              const std::vector<std::vector<std::vector<int>>>& partitions,
                              int restarts, std::uint64_t seed) {
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw InputError("pure_lambda_seesaw: ket not normalized");
  if (restarts < 1) throw InputError("pure_lambda_seesaw: restarts must be >= 1");
  if (partitions.empty()) throw InputError("pure_lambda_seesaw: no partitions given");

  PureLambda best;
  best.restarts_used = restarts;
  int stream = 0;
  for (const auto& groups : partitions) {
    for (int r = 0; r < restarts; ++r, ++stream) {
      Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(stream)));
      std::vector<Ket> factors;
      double lam = seesaw_once(psi, groups, factors, rng);
      if (lam > 1.0 + 1e-9)
        throw NumericalError("seesaw overlap exceeded 1; input likely unnormalized");
      lam = std::min(lam, 1.0);
      if (lam > best.lambda) {
        best.lambda = lam;
        best.maximizer = factors;
        best.best_groups = groups;
      }
    }
  }
  return best;
}

std::vector<std::vector<std::vector<int>>> partitions_into_groups(int n, int k) {
  if (k < 1 || k > n) throw InputError("partitions_into_groups: need 1 <= k <= n");
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> assign(n, 0);
  // Enumerate assignments in restricted-growth form (canonical set partitions).
  auto emit = [&]() {
    int groups = *std::max_element(assign.begin(), assign.end()) + 1;
    if (groups != k) return;
    std::vector<std::vector<int>> g(groups);
    for (int i = 0; i < n; ++i) g[assign[i]].push_back(i);
    out.push_back(std::move(g));
  };
  // Recursive restricted growth strings.
  std::function<void(int, int)> rec = [&](int i, int maxg) {
    if (i == n) {
      emit();
      return;
    }
    for (int g = 0; g <= std::min(maxg + 1, k - 1); ++g) {
      assign[i] = g;
      rec(i + 1, std::max(maxg, g));
    }
  };
  rec(0, -1);
  return out;
}

double audit_witness(const Witness& w, const SeparabilityModel& m, int samples,
                     std::uint64_t seed) {
  Rng rng(seed);
  const int d = m.dim();
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> yr(d), yi(d);
  const auto& mat = w.matrix.mat();
  for (int i = 0; i < samples; ++i) {
    const Ket v = random_model_member(m, rng);
    std::fill(yr.begin(), yr.end(), 0.0);
    std::fill(yi.begin(), yi.end(), 0.0);
    kern::active().zgemv_acc(mat.re.data(), mat.im.data(), v.re.data(), v.im.data(), yr.data(),
                             yi.data(), d, d);
    double e = 0.0;
    for (int j = 0; j < d; ++j) e += v.re[j] * yr[j] + v.im[j] * yi[j];
    worst = std::min(worst, e);
  }
  return worst;
}

}  // namespace qrob
