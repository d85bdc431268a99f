#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrob/robustness.hpp"

namespace qrob {

// Local Pauli measurement setting, one axis per qubit.
enum class PauliAxis : int { X = 0, Y = 1, Z = 2 };

struct MeasurementSetting {
  std::vector<PauliAxis> axes;
  int qubits() const { return static_cast<int>(axes.size()); }
  std::string label() const;  // e.g. "XZY"
};

// All 3^n settings, lexicographic in (X, Y, Z) per qubit.
std::vector<MeasurementSetting> all_settings(int qubits);

// Outcome counts for one setting. shots == 0 is the exact-mode sentinel:
// counts then holds the Born-rule probabilities instead of integers.
struct CountsRecord {
  MeasurementSetting setting;
  std::int64_t shots = 0;
  std::vector<double> counts;  // 2^n entries
};

// Born-rule outcome distribution in the setting's product eigenbasis,
// multinomial-sampled with a seeded deterministic generator.
CountsRecord simulate_counts(const DensityMatrix& rho, const MeasurementSetting& setting,
                             std::int64_t shots, std::uint64_t seed);

// Pauli-string expectation estimates, indexed base-4 (digit order: party 0
// most significant; 0=I, 1=X, 2=Y, 3=Z).
struct PauliTable {
  int qubits = 0;
  std::vector<double> value;
  std::vector<double> std_err;

  std::size_t size() const { return value.size(); }
};

// Parity-weighted outcome frequencies of the first compatible record per
// string; standard error sqrt((1 - e^2)/N), zero in exact mode. Throws
// InputError when some string has no compatible record.
PauliTable estimate_pauli_expectations(const std::vector<CountsRecord>& records);

struct ReconstructionResult {
  DensityMatrix estimate;       // PSD-projected, unit trace
  HermitianMatrix raw;          // linear inversion before projection
  std::int64_t total_shots = 0;
  std::string method;           // "linear-inversion+clip-renormalize"
};

// rho_raw = 2^-n sum_P e_P P, then clip/renormalize projection.
ReconstructionResult reconstruct(const PauliTable& table);

struct WitnessEstimate {
  double value = 0.0;
  double std_err = 0.0;
  bool detected = false;  // value + std_err < 0 per the witness sign convention
};

// <W> as the Pauli-coefficient-weighted sum of estimated expectations;
// uncorrelated error propagation across strings.
WitnessEstimate witness_expectation(const PauliTable& table, const Witness& w);

struct ExperimentRow {
  double q = 0.0;
  double estimate = 0.0;  // robustness estimate = -<W_opt(q)> from counts
  double std_err = 0.0;
  double truth = 0.0;     // noiseless robustness of rho(q)
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

struct ExperimentOptions {
  RobustnessOptions robustness{};
  int threads = 0;
};

// Full simulated pipeline per grid point: sample all 3^n settings on
// rho(q), reconstruct, compute the optimal witness of the reconstruction,
// and estimate its expectation from the same measured table. Per-point
// seeds derive from (seed, grid index); rows are deterministic for a fixed
// base seed regardless of scheduling.
std::vector<ExperimentRow> end_to_end_experiment(const StateFamily& f, Quantifier quant,
                                                 const SeparabilityModel& m, int grid_points,
                                                 std::int64_t shots, std::uint64_t seed,
                                                 const ExperimentOptions& opt = {});

// The 2^n x 2^n matrix of the base-4-indexed Pauli string.
ComplexMatrix pauli_string_matrix(int qubits, int index);

}  // namespace qrob
