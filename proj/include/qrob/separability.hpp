#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrob/sdp.hpp"
#include "qrob/states.hpp"

namespace qrob {

// Computable outer relaxations of the k-separable sets.
//
//   IntersectPPT  relaxes full separability (k = n): every bipartition's
//                 partial transpose must stay PSD.
//   MixturePPT    relaxes biseparability (k = 2): sums of per-bipartition
//                 PPT states.
//   ExactTwoQubit two qubits / qubit-qutrit, where PPT is decisive.
enum class ModelKind { ExactTwoQubit, IntersectPPT, MixturePPT };

struct SeparabilityModel {
  ModelKind kind = ModelKind::IntersectPPT;
  std::vector<int> dims;
  std::vector<Bipartition> cuts;

  static SeparabilityModel exact_two_qubit(const std::vector<int>& dims);
  static SeparabilityModel intersect_ppt(const std::vector<int>& dims);
  static SeparabilityModel mixture_ppt(const std::vector<int>& dims);

  int dim() const;
  int parties() const { return static_cast<int>(dims.size()); }
  std::string tag() const;  // "exact2q" | "ppt-intersect" | "ppt-mixture"
};

enum class WitnessNormalization { TraceD, BoundedByIdentity };
enum class CertificateMode { PerPartition, Summed };

const char* normalization_name(WitnessNormalization n);

// Cone decomposition proving the witness nonnegative on the model:
//   Summed:        W = P + sum_M Q_M^{T_M}
//   PerPartition:  W = P_M + Q_M^{T_M} for every bipartition M
struct CertComponent {
  Bipartition cut;
  HermitianMatrix p;  // unused in Summed mode (zero)
  HermitianMatrix q;
};

struct WitnessCertificate {
  CertificateMode mode = CertificateMode::Summed;
  HermitianMatrix p;  // Summed-mode positive part
  std::vector<CertComponent> parts;
  double reconstruction_residual = 0.0;
  double min_component_eig = 0.0;
};

// Monte Carlo validity audit record for witnesses without a cone
// certificate (the analytic pure-state route).
struct AuditRecord {
  int samples = 0;
  double min_expectation = 0.0;
  std::uint64_t seed = 0;
};

struct Witness {
  HermitianMatrix matrix;
  WitnessNormalization normalization = WitnessNormalization::TraceD;
  std::optional<WitnessCertificate> certificate;
  std::optional<AuditRecord> audit;
};

enum class ProgramKind { RrPrimal, RrDual, GrPrimal, GrDual, Membership };

// A cone program together with the block bookkeeping needed to read the
// solution back in model terms.
struct ConeProgram {
  sdp::Problem problem;
  ProgramKind kind = ProgramKind::RrPrimal;
  SeparabilityModel model;
  DensityMatrix rho;

  int s_block = -1;               // scalar s (state-side programs)
  int pi_block = -1;              // Pi (generalized primal)
  int p_block = -1;               // P (Summed) / P of the reference cut
  int r_block = -1;               // R = I - W slack (generalized dual)
  std::vector<int> x_blocks;      // per-cut Y_M (primal) or Q_M (dual)
  std::vector<int> xt_blocks;     // per-cut Z_M (primal) or P_M (per-partition dual)
  double value_sign = 1.0;
  double value_offset = 0.0;

  double program_value(const sdp::Solution& sol) const {
    return value_sign * sol.primal_obj + value_offset;
  }
};

// State-side programs: minimize s (random) / Tr(Pi) (generalized) subject
// to rho + s I/d resp. rho + Pi lying in the model cone.
ConeProgram build_rr_primal(const DensityMatrix& rho, const SeparabilityModel& m);
ConeProgram build_gr_primal(const DensityMatrix& rho, const SeparabilityModel& m);

// Witness-side programs: maximize -Tr(W rho) over the dual cone with
// Tr W = d (random) or W <= I (generalized).
ConeProgram build_rr_dual(const DensityMatrix& rho, const SeparabilityModel& m);
ConeProgram build_gr_dual(const DensityMatrix& rho, const SeparabilityModel& m);

// Rebuilds the witness from the dual solve and re-verifies the certificate
// from scratch. Throws NumericalError when the reconstruction residual
// exceeds 1e-7 or a component fails its PSD bound.
Witness extract_witness(const sdp::Solution& sol, const ConeProgram& prog);

struct MembershipResult {
  bool inside = false;
  double violation = 0.0;  // most negative PT eigenvalue / scaled SDP margin
  std::string detail;
};

MembershipResult membership_check(const DensityMatrix& sigma, const SeparabilityModel& m,
                                  double tol = 1e-6);

// Haar-random extreme point of the model (product kets; for MixturePPT a
// random cut with Haar factors on the two sides).
Ket random_model_member(const SeparabilityModel& m, Rng& rng);

}  // namespace qrob
