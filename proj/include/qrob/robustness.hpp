#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrob/separability.hpp"

namespace qrob {

enum class Quantifier { Random, Generalized };

const char* quantifier_name(Quantifier q);  // "rr" | "gr"

struct RobustnessOptions {
  sdp::SolveOptions sdp{};
  double gap_tol = 1e-6;   // primal/dual cross-validation tolerance
  bool validate_boundary = true;  // run membership_check on sigma*
};

struct RobustnessResult {
  Quantifier quantifier = Quantifier::Random;
  std::string model_tag;
  double value = 0.0;        // clamped to >= 0
  double primal_value = 0.0; // state-side optimum
  double dual_value = 0.0;   // witness-side optimum (negative for separable input)
  double gap = 0.0;          // |value - max(dual_value, 0)|
  bool clamped = false;
  Witness witness;
  DensityMatrix boundary_state;
  std::optional<DensityMatrix> optimal_noise;  // generalized only, None when s ~ 0
  // MixturePPT only: the per-cut components X_M of the boundary state's
  // decomposition sum_M X_M = (1+s) sigma*, scaled to sum to sigma*.
  std::vector<std::pair<Bipartition, HermitianMatrix>> mixture_components;
  sdp::Status status = sdp::Status::SlowProgress;
  int primal_iterations = 0, dual_iterations = 0;
};

// Solves the state-side and witness-side cone programs, cross-validates
// them against each other, and assembles the result. Throws NumericalError
// when either solve fails or the cross-gap exceeds the tolerance.
RobustnessResult random_robustness(const DensityMatrix& rho, const SeparabilityModel& m,
                                   const RobustnessOptions& opt = {});
RobustnessResult generalized_robustness(const DensityMatrix& rho, const SeparabilityModel& m,
                                        const RobustnessOptions& opt = {});

// (rho + s pi) / (1 + s)
DensityMatrix boundary_state(const DensityMatrix& rho, double s, const DensityMatrix& pi);

// lambda I - |psi><psi|, tagged bounded-by-identity. Expectation on psi is
// lambda - 1; valid on S_k when lambda >= max overlap with S_k members.
Witness pure_state_witness(const Ket& psi, double lambda);

struct PureLambda {
  double lambda = 0.0;
  std::vector<Ket> maximizer;                 // factors of the best product
  std::vector<std::vector<int>> best_groups;  // grouping that attained the max
  int restarts_used = 0;
};

// Alternating per-factor overlap maximization of |<psi|product>|^2 over
// every grouping in `partitions`, best of `restarts` seeded restarts each.
// The per-iteration overlap sequence is non-decreasing.
PureLambda pure_lambda_seesaw(const Ket& psi,
                              const std::vector<std::vector<std::vector<int>>>& partitions,
                              int restarts, std::uint64_t seed);

// All partitions of {0..n-1} into exactly k nonempty groups.
std::vector<std::vector<std::vector<int>>> partitions_into_groups(int n, int k);

// Minimum of Tr(W sigma) over `samples` random model members; the witness
// is valid on the sampled set when the result is >= -1e-8.
double audit_witness(const Witness& w, const SeparabilityModel& m, int samples,
                     std::uint64_t seed);

}  // namespace qrob
