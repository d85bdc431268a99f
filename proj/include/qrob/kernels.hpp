#pragma once

#include <cstddef>

// Low-level dense kernels used by the matrix layer and the SDP solver.
// A scalar reference implementation always exists; an AVX2 variant is
// selected at runtime when the CPU supports it. The two lanes are
// equivalence-tested against each other in tests/test_kernels.cpp.
// QROB_KERNELS=scalar|avx2 in the environment forces a lane.

namespace qrob::kern {

struct Ops {
  const char* name;

  // sum_i x[i]*y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a*x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x *= a
  void (*scal)(double a, double* x, std::size_t n);
  // C(n x p) += A(n x m) * B(m x p), all row-major dense
  void (*gemm_acc)(const double* a, const double* b, double* c, int n, int m, int p);
  // split-complex C += A*B with separate real/imag planes, row-major
  void (*zgemm_acc)(const double* ar, const double* ai, const double* br, const double* bi,
                    double* cr, double* ci, int n, int m, int p);
  // split-complex y += A*x, A is n x m
  void (*zgemv_acc)(const double* ar, const double* ai, const double* xr, const double* xi,
                    double* yr, double* yi, int n, int m);
};

const Ops& scalar_ops();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const Ops* avx2_ops();

// Runtime-selected lane. Stable for the lifetime of the process.
const Ops& active();

// Force a lane by name ("scalar", "avx2"). Returns false if unavailable.
bool set_active(const char* name);

}  // namespace qrob::kern
