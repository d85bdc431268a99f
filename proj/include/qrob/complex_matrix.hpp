#pragma once

#include <complex>
#include <vector>

#include "qrob/error.hpp"

namespace qrob {

using cplx = std::complex<double>;

// Dense complex matrix, split real/imag storage, row-major.
struct ComplexMatrix {
  int dim = 0;
  std::vector<double> re, im;

  ComplexMatrix() = default;
  explicit ComplexMatrix(int d)
      : dim(d), re(static_cast<std::size_t>(d) * d, 0.0), im(static_cast<std::size_t>(d) * d, 0.0) {}

  static ComplexMatrix identity(int d) {
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i) m.re[static_cast<std::size_t>(i) * d + i] = 1.0;
    return m;
  }

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * dim + j; }
  cplx at(int i, int j) const { return {re[idx(i, j)], im[idx(i, j)]}; }
  void set(int i, int j, cplx v) {
    re[idx(i, j)] = v.real();
    im[idx(i, j)] = v.imag();
  }
  void add_at(int i, int j, cplx v) {
    re[idx(i, j)] += v.real();
    im[idx(i, j)] += v.imag();
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(double a);
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(double a, ComplexMatrix m);

// C = A*B through the kernel layer.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix transpose_of(const ComplexMatrix& m);
cplx trace(const ComplexMatrix& m);
double fro_norm(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);

// Hermiticity deviation max_ij |m_ij - conj(m_ji)|.
double herm_deviation(const ComplexMatrix& m);

// Kronecker product; the first factor is the most significant index block.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// Hermitian matrix: construction rejects inputs whose entries deviate from
// conjugate symmetry by more than `tol` (absolute), then stores the exact
// Hermitian average so downstream code can rely on it bit-for-bit.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = 1e-12);

  // Skips the tolerance check but still symmetrizes. For solver output
  // whose asymmetry is known to be roundoff.
  static HermitianMatrix symmetrized(const ComplexMatrix& m);

  const ComplexMatrix& mat() const { return m_; }
  int dim() const { return m_.dim; }
  cplx at(int i, int j) const { return m_.at(i, j); }

 private:
  ComplexMatrix m_;
};

// Tr(a*b) for Hermitian a, b; exact real-valued contraction.
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

HermitianMatrix herm_add(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix herm_sub(const HermitianMatrix& a, const HermitianMatrix& b);
HermitianMatrix herm_scale(double s, const HermitianMatrix& a);

}  // namespace qrob
