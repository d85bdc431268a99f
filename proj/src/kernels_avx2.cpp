#include "qrob/kernels.hpp"

#if defined(QROB_BUILD_AVX2) && defined(__AVX2__)

#include <immintrin.h>

namespace qrob::kern {
namespace {

inline double hsum4(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double s = hsum4(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(double a, double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void gemm_acc_avx2(const double* a, const double* b, double* c, int n, int m, int p) {
  for (int i = 0; i < n; ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * m;
    double* ci = c + static_cast<std::size_t>(i) * p;
    for (int k = 0; k < m; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b + static_cast<std::size_t>(k) * p;
      const __m256d av = _mm256_set1_pd(aik);
      int j = 0;
      for (; j + 4 <= p; j += 4) {
        __m256d cv = _mm256_loadu_pd(ci + j);
        cv = _mm256_fmadd_pd(av, _mm256_loadu_pd(bk + j), cv);
        _mm256_storeu_pd(ci + j, cv);
      }
      for (; j < p; ++j) ci[j] += aik * bk[j];
    }
  }
}

void zgemm_acc_avx2(const double* ar, const double* ai, const double* br, const double* bi,
                    double* cr, double* ci, int n, int m, int p) {
  for (int i = 0; i < n; ++i) {
    const std::size_t ia = static_cast<std::size_t>(i) * m;
    const std::size_t ic = static_cast<std::size_t>(i) * p;
    for (int k = 0; k < m; ++k) {
      const double xr = ar[ia + k];
      const double xi = ai[ia + k];
      if (xr == 0.0 && xi == 0.0) continue;
      const std::size_t ib = static_cast<std::size_t>(k) * p;
      const __m256d xrv = _mm256_set1_pd(xr);
      const __m256d xiv = _mm256_set1_pd(xi);
      int j = 0;
      for (; j + 4 <= p; j += 4) {
        const __m256d yrv = _mm256_loadu_pd(br + ib + j);
        const __m256d yiv = _mm256_loadu_pd(bi + ib + j);
        __m256d crv = _mm256_loadu_pd(cr + ic + j);
        __m256d civ = _mm256_loadu_pd(ci + ic + j);
        crv = _mm256_fmadd_pd(xrv, yrv, crv);
        crv = _mm256_fnmadd_pd(xiv, yiv, crv);
        civ = _mm256_fmadd_pd(xrv, yiv, civ);
        civ = _mm256_fmadd_pd(xiv, yrv, civ);
        _mm256_storeu_pd(cr + ic + j, crv);
        _mm256_storeu_pd(ci + ic + j, civ);
      }
      for (; j < p; ++j) {
        const double yr = br[ib + j], yi = bi[ib + j];
        cr[ic + j] += xr * yr - xi * yi;
        ci[ic + j] += xr * yi + xi * yr;
      }
    }
  }
}

void zgemv_acc_avx2(const double* ar, const double* ai, const double* xr, const double* xi,
                    double* yr, double* yi, int n, int m) {
  for (int i = 0; i < n; ++i) {
    const std::size_t ia = static_cast<std::size_t>(i) * m;
    __m256d srr = _mm256_setzero_pd(), sii = _mm256_setzero_pd();
    __m256d sri = _mm256_setzero_pd(), sir = _mm256_setzero_pd();
    int j = 0;
    for (; j + 4 <= m; j += 4) {
      const __m256d av = _mm256_loadu_pd(ar + ia + j);
      const __m256d bv = _mm256_loadu_pd(ai + ia + j);
      const __m256d cv = _mm256_loadu_pd(xr + j);
      const __m256d dv = _mm256_loadu_pd(xi + j);
      srr = _mm256_fmadd_pd(av, cv, srr);
      sii = _mm256_fmadd_pd(bv, dv, sii);
      sri = _mm256_fmadd_pd(av, dv, sri);
      sir = _mm256_fmadd_pd(bv, cv, sir);
    }
    double r = hsum4(srr) - hsum4(sii);
    double s = hsum4(sri) + hsum4(sir);
    for (; j < m; ++j) {
      const double vr = xr[j], vi = xi[j];
      r += ar[ia + j] * vr - ai[ia + j] * vi;
      s += ar[ia + j] * vi + ai[ia + j] * vr;
    }
    yr[i] += r;
    yi[i] += s;
  }
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops{"avx2",       dot_avx2,      axpy_avx2,
                       scal_avx2,    gemm_acc_avx2, zgemm_acc_avx2,
                       zgemv_acc_avx2};
  return &ops;
}

}  // namespace qrob::kern

#else

namespace qrob::kern {
const Ops* avx2_ops_impl() { return nullptr; }
}  // namespace qrob::kern

#endif
