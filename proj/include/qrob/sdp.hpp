#pragma once

#include <string>
#include <vector>

#include "qrob/complex_matrix.hpp"

namespace qrob::sdp {

// Standard-form semidefinite program over block-diagonal real symmetric
// variables:
//   minimize   <C, X>
//   subject to <A_i, X> = b_i   (i = 1..m),   X >= 0 (PSD, blockwise)
// with dual
//   maximize   b'y   subject to  S = C - sum_i y_i A_i >= 0.
//
// Complex Hermitian data enters through the real embedding
// [[Re, -Im], [Im, Re]]; blocks carrying such data are tagged so the
// builders can map solutions back (objective factors of 1/2 are applied
// at construction, so problem-level objective values need no rescaling).

struct BlockSpec {
  int size = 0;          // real symmetric block size
  bool embedded = false; // true: represents a Hermitian matrix of dim size/2
};

// One entry of a sparse symmetric matrix; r <= c, and an off-diagonal
// entry (r, c, v) stands for v at (r,c) and v at (c,r).
struct SymEntry {
  int blk = 0;
  int r = 0, c = 0;
  double v = 0.0;
};

struct Constraint {
  std::vector<SymEntry> a;
  double b = 0.0;
};

struct Problem {
  std::string name;
  std::vector<BlockSpec> blocks;
  // Objective, dense per block, row-major full symmetric storage.
  std::vector<std::vector<double>> C;
  std::vector<Constraint> constraints;

  int block_count() const { return static_cast<int>(blocks.size()); }
  int total_dim() const;

  // Removes constraints that are linearly dependent on earlier ones
  // (rank tolerance 1e-10 relative). Throws InputError when a removed
  // constraint has an inconsistent right-hand side. Returns the number
  // of removed constraints.
  int deduplicate_constraints();
};

enum class Status { Optimal, PrimalInfeasible, DualInfeasible, SlowProgress };

const char* status_name(Status s);

struct Solution {
  Status status = Status::SlowProgress;
  std::vector<std::vector<double>> X, S;  // dense blocks, full symmetric
  std::vector<double> y;
  double primal_obj = 0.0, dual_obj = 0.0;
  double gap = 0.0;          // |primal_obj - dual_obj|
  double rel_gap = 0.0;      // gap / (1 + |primal_obj|)
  double primal_res = 0.0;   // ||A(X)-b|| / (1+||b||)
  double dual_res = 0.0;     // ||C-S-A'y||_F / (1+||C||_F)
  double mu = 0.0;
  int iterations = 0;
  std::string message;
};

struct SolveOptions {
  double tol_feas = 1e-8;
  double tol_gap = 1e-7;
  int max_iter = 200;
  double divergence_bound = 1e8;
  double step_frac = 0.98;
};

// Primal-dual path-following with NT scaling and Mehrotra
// predictor-corrector. Deterministic: identical inputs give bitwise
// identical solutions.
Solution solve(const Problem& p, const SolveOptions& opt = {});

struct CheckItem {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double bound = 0.0;
};

struct CertReport {
  std::vector<CheckItem> checks;
  bool all_pass() const;
};

// Recomputes feasibility residuals, eigenvalue bounds and the duality gap
// from scratch; never trusts numbers cached inside the solution.
CertReport validate_certificates(const Problem& p, const Solution& s);

// Real embedding of a Hermitian matrix: [[Re, -Im], [Im, Re]],
// returned as dense 2d x 2d row-major. PSD iff the input is PSD; every
// eigenvalue appears with doubled multiplicity.
std::vector<double> hermitian_embedding(const ComplexMatrix& h);

// --- builder helpers -------------------------------------------------------

// Appends a fresh block; returns its index.
int add_block(Problem& p, int size, bool embedded);

// Adds 0.5*scale*embed(K) into the objective of embedded block `blk`,
// so that the contribution to <C, X> equals scale*Tr(K . X_complex).
void add_objective_embedded(Problem& p, int blk, const ComplexMatrix& k, double scale = 1.0);
void add_objective_scalar(Problem& p, int blk, double v);

// Appends the sparse entries of 0.5*scale*embed(K) for block `blk`.
void add_coeff_embedded(Constraint& c, const Problem& p, int blk, const ComplexMatrix& k,
                        double scale = 1.0);
void add_coeff_scalar(Constraint& c, int blk, double v);

// Complex part of the J-symmetrized embedded block of a solution.
ComplexMatrix extract_hermitian(const std::vector<double>& block, int herm_dim);

}  // namespace qrob::sdp
