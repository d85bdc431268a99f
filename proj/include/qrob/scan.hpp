#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrob/robustness.hpp"

namespace qrob {

struct KinkReport {
  double location = 0.0;       // q*
  double left_slope = 0.0;     // fitted on the adjacent segment
  double right_slope = 0.0;
  double score = 0.0;          // second-difference magnitude / median
  double bracket_lo = 0.0, bracket_hi = 0.0;
  bool refined = false;
  bool witness_corroborated = false;
};

struct PhaseInterval {
  double lo = 0.0, hi = 0.0;
  std::string label;  // "Separable" | "Entangled-1" | ...
};

struct ScanPoint {
  double q = 0.0;
  bool ok = false;
  RobustnessResult result;  // valid when ok
  std::string error;        // set when !ok
};

struct ScanOptions {
  double kink_threshold = 10.0;    // kappa
  double witness_threshold = 5.0;  // kappa_w
  double separable_tol = 1e-6;
  bool refine = false;
  int threads = 0;  // 0 = hardware concurrency
  RobustnessOptions robustness{};
};

struct ScanResult {
  std::string family;
  Quantifier quantifier = Quantifier::Random;
  std::string model_tag;
  std::vector<double> grid;
  std::vector<ScanPoint> curve;
  std::vector<KinkReport> kinks;
  std::vector<std::pair<std::pair<double, double>, double>> witness_jumps;  // (interval, size)
  std::vector<double> witness_step;  // per-point distance to previous witness (0 for first)
  std::vector<PhaseInterval> phases;
  double lipschitz_estimate = 0.0;

  std::vector<double> values() const;
};

// Uniform grid on [0,1]; points solved independently (parallel map keyed by
// index, deterministic aggregation). Isolated failures become gaps; more
// than 10% failed points raises NumericalError.
ScanResult scan_family(const StateFamily& f, Quantifier quant, const SeparabilityModel& m,
                       int grid_points, const ScanOptions& opt = {});

// Second-difference outlier detection on a uniformly sampled curve. Flags
// |f_{i+1} - 2 f_i + f_{i-1}| / h^2 above threshold x median (the median is
// floored at 1e-3 of the maximum score so exactly-linear segments do not
// reduce it to solver noise), merges adjacent flags, reports the
// maximal-score point of each run together with its bracket. Points with
// f below `value_floor` are excluded (the separable phase is handled by
// phase labels instead).
std::vector<KinkReport> detect_kinks(const std::vector<double>& grid,
                                     const std::vector<double>& values, double threshold,
                                     double value_floor = 1e-7);

// Re-solves the curve inside the bracket, halving the span around the
// maximal local second difference until it is below `tol`. Returns nullopt
// when the scored slope jump vanishes under refinement (a smooth-curvature
// false positive).
std::optional<KinkReport> refine_kink(const StateFamily& f, Quantifier quant,
                                      const SeparabilityModel& m, double lo, double hi,
                                      double tol = 1e-3,
                                      const RobustnessOptions& ropt = {});

// Frobenius distances between consecutive optimal witnesses; intervals
// exceeding threshold x median are flagged.
std::vector<std::pair<std::pair<double, double>, double>> witness_jumps(
    const ScanResult& scan, double threshold);

// Tr(W_i rho(q)) table for fixed witnesses; exact linear functions of q for
// affine families. Returns per-witness rows plus the crossing points of the
// pointwise minimum envelope, located by linear interpolation.
struct FixedWitnessScan {
  std::vector<double> grid;
  std::vector<std::vector<double>> expectations;  // [witness][point]
  std::vector<double> envelope_crossings;
};

FixedWitnessScan fixed_witness_scan(const StateFamily& f, const std::vector<Witness>& witnesses,
                                    int grid_points);

// Intervals with value <= tol labeled Separable; the rest split at kink
// locations, labeled Entangled-1, Entangled-2, ... left to right.
std::vector<PhaseInterval> phase_labels(const std::vector<double>& grid,
                                        const std::vector<double>& values,
                                        const std::vector<KinkReport>& kinks, double tol);

// Least-squares two-segment fit: returns the breakpoint minimizing the
// total SSE of independent linear fits left and right. Used for kink
// localization on noisy (finite-shot) curves.
double fit_two_segment_breakpoint(const std::vector<double>& grid,
                                  const std::vector<double>& values);

}  // namespace qrob
