#include "qrob/kernels.hpp"

namespace qrob::kern {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void gemm_acc_scalar(const double* a, const double* b, double* c, int n, int m, int p) {
  for (int i = 0; i < n; ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * m;
    double* ci = c + static_cast<std::size_t>(i) * p;
    for (int k = 0; k < m; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b + static_cast<std::size_t>(k) * p;
      for (int j = 0; j < p; ++j) ci[j] += aik * bk[j];
    }
  }
}

void zgemm_acc_scalar(const double* ar, const double* ai, const double* br, const double* bi,
                      double* cr, double* ci, int n, int m, int p) {
  for (int i = 0; i < n; ++i) {
    const std::size_t ia = static_cast<std::size_t>(i) * m;
    const std::size_t ic = static_cast<std::size_t>(i) * p;
    for (int k = 0; k < m; ++k) {
      const double xr = ar[ia + k];
      const double xi = ai[ia + k];
      if (xr == 0.0 && xi == 0.0) continue;
      const std::size_t ib = static_cast<std::size_t>(k) * p;
      for (int j = 0; j < p; ++j) {
        const double yr = br[ib + j];
        const double yi = bi[ib + j];
        cr[ic + j] += xr * yr - xi * yi;
        ci[ic + j] += xr * yi + xi * yr;
      }
    }
  }
}

void zgemv_acc_scalar(const double* ar, const double* ai, const double* xr, const double* xi,
                      double* yr, double* yi, int n, int m) {
  for (int i = 0; i < n; ++i) {
    const std::size_t ia = static_cast<std::size_t>(i) * m;
    double sr = 0.0, si = 0.0;
    for (int j = 0; j < m; ++j) {
      const double vr = xr[j], vi = xi[j];
      sr += ar[ia + j] * vr - ai[ia + j] * vi;
      si += ar[ia + j] * vi + ai[ia + j] * vr;
    }
    yr[i] += sr;
    yi[i] += si;
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{"scalar",        dot_scalar,   axpy_scalar,
                       scal_scalar,     gemm_acc_scalar, zgemm_acc_scalar,
                       zgemv_acc_scalar};
  return ops;
}

}  // namespace qrob::kern
