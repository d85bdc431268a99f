#pragma once

#include <vector>

#include "qrob/complex_matrix.hpp"

namespace qrob {

// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending,
// eigenvectors stored as orthonormal columns.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
};

// Cyclic complex Jacobi. High relative accuracy; fine for dim <= 64.
Spectrum herm_eig(const HermitianMatrix& m);

double min_eigenvalue(const HermitianMatrix& m);
double max_eigenvalue(const HermitianMatrix& m);

// Real symmetric eigensolver (Householder tridiagonalization + implicit QL).
// Independent of the Jacobi path; used by the SDP solver internals and as a
// cross-check oracle. `a` is n x n row-major and is not modified.
// Eigenvalues ascending in w, eigenvectors as columns of v (row-major n x n).
void sym_eig(int n, const std::vector<double>& a, std::vector<double>& w,
             std::vector<double>& v);

// Frobenius-nearest PSD matrix: clip negative eigenvalues to zero. With
// renormalize_trace the result is additionally scaled to unit trace;
// throws NumericalError when everything clips away.
HermitianMatrix psd_project(const HermitianMatrix& m, bool renormalize_trace);

}  // namespace qrob
