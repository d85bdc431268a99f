#include "qrob/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "qrob/kernels.hpp"

namespace qrob {

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (o.dim != dim) throw InputError("matrix dimension mismatch in +=");
  kern::active().axpy(1.0, o.re.data(), re.data(), re.size());
  kern::active().axpy(1.0, o.im.data(), im.data(), im.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (o.dim != dim) throw InputError("matrix dimension mismatch in -=");
  kern::active().axpy(-1.0, o.re.data(), re.data(), re.size());
  kern::active().axpy(-1.0, o.im.data(), im.data(), im.size());
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double a) {
  kern::active().scal(a, re.data(), re.size());
  kern::active().scal(a, im.data(), im.size());
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(double a, ComplexMatrix m) { return m *= a; }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim != b.dim) throw InputError("matrix dimension mismatch in matmul");
  ComplexMatrix c(a.dim);
  kern::active().zgemm_acc(a.re.data(), a.im.data(), b.re.data(), b.im.data(), c.re.data(),
                           c.im.data(), a.dim, a.dim, a.dim);
  return c;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix r(m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) {
      r.re[r.idx(i, j)] = m.re[m.idx(j, i)];
      r.im[r.idx(i, j)] = -m.im[m.idx(j, i)];
    }
  return r;
}

ComplexMatrix transpose_of(const ComplexMatrix& m) {
  ComplexMatrix r(m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) {
      r.re[r.idx(i, j)] = m.re[m.idx(j, i)];
      r.im[r.idx(i, j)] = m.im[m.idx(j, i)];
    }
  return r;
}

cplx trace(const ComplexMatrix& m) {
  cplx t = 0.0;
  for (int i = 0; i < m.dim; ++i) t += m.at(i, i);
  return t;
}

double fro_norm(const ComplexMatrix& m) {
  const auto& k = kern::active();
  double s = k.dot(m.re.data(), m.re.data(), m.re.size()) +
             k.dot(m.im.data(), m.im.data(), m.im.size());
  return std::sqrt(s);
}

double max_abs(const ComplexMatrix& m) {
  double v = 0.0;
  for (std::size_t i = 0; i < m.re.size(); ++i)
    v = std::max(v, std::hypot(m.re[i], m.im[i]));
  return v;
}

double herm_deviation(const ComplexMatrix& m) {
  double dev = 0.0;
  for (int i = 0; i < m.dim; ++i)
    for (int j = i; j < m.dim; ++j) {
      const cplx d = m.at(i, j) - std::conj(m.at(j, i));
      dev = std::max(dev, std::abs(d));
    }
  return dev;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.dim * b.dim);
  for (int ia = 0; ia < a.dim; ++ia)
    for (int ja = 0; ja < a.dim; ++ja) {
      const cplx va = a.at(ia, ja);
      if (va == cplx{0.0, 0.0}) continue;
      for (int ib = 0; ib < b.dim; ++ib)
        for (int jb = 0; jb < b.dim; ++jb) {
          const cplx vb = b.at(ib, jb);
          if (vb == cplx{0.0, 0.0}) continue;
          r.set(ia * b.dim + ib, ja * b.dim + jb, va * vb);
        }
    }
  return r;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  const double dev = herm_deviation(m);
  if (dev > tol)
    throw InputError("matrix is not Hermitian: max deviation " + std::to_string(dev));
  *this = symmetrized(m);
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  HermitianMatrix h;
  h.m_ = ComplexMatrix(m.dim);
  for (int i = 0; i < m.dim; ++i) {
    h.m_.set(i, i, {m.re[m.idx(i, i)], 0.0});
    for (int j = i + 1; j < m.dim; ++j) {
      const cplx v = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
      h.m_.set(i, j, v);
      h.m_.set(j, i, std::conj(v));
    }
  }
  return h;
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw InputError("hs_inner: dimension mismatch");
  const auto& k = kern::active();
  const ComplexMatrix& ma = a.mat();
  const ComplexMatrix& mb = b.mat();
  // Tr(ab) = sum_ij a_ij conj(b_ij) for Hermitian b; the imaginary part
  // cancels exactly after symmetrization.
  return k.dot(ma.re.data(), mb.re.data(), ma.re.size()) +
         k.dot(ma.im.data(), mb.im.data(), ma.im.size());
}

HermitianMatrix herm_add(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix::symmetrized(a.mat() + b.mat());
}

HermitianMatrix herm_sub(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix::symmetrized(a.mat() - b.mat());
}

HermitianMatrix herm_scale(double s, const HermitianMatrix& a) {
  return HermitianMatrix::symmetrized(s * ComplexMatrix(a.mat()));
}

}  // namespace qrob
