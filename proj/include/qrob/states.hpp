#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qrob/complex_matrix.hpp"
#include "qrob/eig.hpp"
#include "qrob/rng.hpp"

namespace qrob {

// Pure state on a tensor product of subsystems. Party 0 owns the most
// significant digit of the computational-basis index.
struct Ket {
  std::vector<int> dims;
  std::vector<double> re, im;

  int dim() const;
  int parties() const { return static_cast<int>(dims.size()); }
  cplx amp(int i) const { return {re[i], im[i]}; }
  double norm() const;
  void normalize();
};

cplx ket_inner(const Ket& a, const Ket& b);  // <a|b>
Ket ket_tensor(const Ket& a, const Ket& b);

// Density matrix: Hermitian, PSD (min eig >= -1e-10), unit trace (1e-10).
class DensityMatrix {
 public:
  DensityMatrix() = default;

  // Validates the invariants; throws InputError on violation.
  static DensityMatrix from_matrix(const HermitianMatrix& m, std::vector<int> dims);
  // Trusted construction for internal paths that guarantee the invariants.
  static DensityMatrix unchecked(HermitianMatrix m, std::vector<int> dims);

  const HermitianMatrix& matrix() const { return m_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return m_.dim(); }
  int parties() const { return static_cast<int>(dims_.size()); }

 private:
  HermitianMatrix m_;
  std::vector<int> dims_;
};

DensityMatrix projector(const Ket& psi);
DensityMatrix maximally_mixed(const std::vector<int>& dims);

// Bipartition of n parties; the canonical member set always contains
// party 0, so M and its complement are never double counted.
struct Bipartition {
  int parties = 0;
  std::uint32_t members = 0;  // bit i set <=> party i in the member set

  bool contains(int party) const { return (members >> party) & 1u; }
  std::vector<int> member_list() const;
  std::string label() const;  // e.g. "0|12"
};

// All 2^(n-1)-1 canonical bipartitions, ordered lexicographically by
// member set.
std::vector<Bipartition> enumerate_bipartitions(int n);

// One-parameter state family over q in [0, 1].
struct StateFamily {
  std::string name;
  std::vector<int> dims;
  std::function<DensityMatrix(double)> at;
};

Ket ket_ghz();
Ket ket_w();
Ket ket_bell();
Ket basis_ket(const std::vector<int>& dims, int index);

// q|GHZ><GHZ| + (1-q)|W><W|
DensityMatrix ghz_w_family(double q);
// p rho + (1-p) I/d
DensityMatrix white_noise_mix(const DensityMatrix& rho, double p);

StateFamily family_ghz_w();
StateFamily family_werner();          // q Bell + (1-q) I/4
StateFamily family_constant_mixed();  // I/4 for every q

// Transposition of the tensor factors selected by `cut`.
HermitianMatrix partial_transpose(const HermitianMatrix& m, const std::vector<int>& dims,
                                  const Bipartition& cut);
HermitianMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& cut);

// Reduced state on the parties listed in `keep` (ascending).
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Hilbert-Schmidt-style random state: G G^dag / Tr(G G^dag), G a dim x rank
// matrix of standard complex Gaussians.
DensityMatrix random_density(int dim, int rank, std::uint64_t seed,
                             std::vector<int> dims = {});

Ket random_ket(const std::vector<int>& dims, Rng& rng);
// Product of independent Haar-random factor kets, one per group of parties.
Ket random_product_ket(const std::vector<int>& dims, const std::vector<std::vector<int>>& groups,
                       Rng& rng);
// Haar-random unitary on `dim` dimensions (Gaussian + QR with phase fix).
ComplexMatrix random_unitary(int dim, Rng& rng);

double purity(const DensityMatrix& rho);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double fidelity_with_pure(const Ket& psi, const DensityMatrix& rho);  // <psi|rho|psi>

}  // namespace qrob
