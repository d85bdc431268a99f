#include "qrob/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qrob {

ComplexMatrix Spectrum::reconstruct() const {
  const int n = eigenvectors.dim;
  ComplexMatrix scaled = eigenvectors;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      scaled.re[scaled.idx(i, j)] *= eigenvalues[j];
      scaled.im[scaled.idx(i, j)] *= eigenvalues[j];
    }
  return matmul(scaled, adjoint(eigenvectors));
}

namespace {

double offdiag_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      if (i != j) s += std::norm(a.at(i, j));
  return std::sqrt(s);
}

}  // namespace

Spectrum herm_eig(const HermitianMatrix& m) {
  const int n = m.dim();
  ComplexMatrix a = m.mat();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(1.0, fro_norm(a));
  const double stop = 1e-15 * scale;
  const int max_sweeps = 60;

  for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a) > stop; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx g = a.at(p, q);
        const double ag = std::abs(g);
        if (ag <= 1e-300) continue;
        const cplx phase = g / ag;  // g = ag * phase
        const double app = a.re[a.idx(p, p)];
        const double aqq = a.re[a.idx(q, q)];
        const double tau = (aqq - app) / (2.0 * ag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Unitary J: J_pp = c, J_pq = s; J_qp = -conj(phase)*s, J_qq = conj(phase)*c.
        const cplx jqp = -std::conj(phase) * s;
        const cplx jqq = std::conj(phase) * c;
        // A <- A J (columns p, q)
        for (int r = 0; r < n; ++r) {
          const cplx arp = a.at(r, p), arq = a.at(r, q);
          a.set(r, p, c * arp + jqp * arq);
          a.set(r, q, s * arp + jqq * arq);
        }
        // A <- J^H A (rows p, q)
        for (int r = 0; r < n; ++r) {
          const cplx apr = a.at(p, r), aqr = a.at(q, r);
          a.set(p, r, c * apr + std::conj(jqp) * aqr);
          a.set(q, r, s * apr + std::conj(jqq) * aqr);
        }
        // V <- V J
        for (int r = 0; r < n; ++r) {
          const cplx vrp = v.at(r, p), vrq = v.at(r, q);
          v.set(r, p, c * vrp + jqp * vrq);
          v.set(r, q, s * vrp + jqq * vrq);
        }
        // Kill roundoff on the zeroed pair and keep the diagonal real.
        a.set(p, q, {0.0, 0.0});
        a.set(q, p, {0.0, 0.0});
        a.im[a.idx(p, p)] = 0.0;
        a.im[a.idx(q, q)] = 0.0;
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a.re[a.idx(i, i)] < a.re[a.idx(j, j)]; });

  Spectrum sp;
  sp.eigenvalues.resize(n);
  sp.eigenvectors = ComplexMatrix(n);
  for (int j = 0; j < n; ++j) {
    sp.eigenvalues[j] = a.re[a.idx(order[j], order[j])];
    for (int i = 0; i < n; ++i) sp.eigenvectors.set(i, j, v.at(i, order[j]));
  }
  return sp;
}

double min_eigenvalue(const HermitianMatrix& m) { return herm_eig(m).eigenvalues.front(); }
double max_eigenvalue(const HermitianMatrix& m) { return herm_eig(m).eigenvalues.back(); }

// ---------------------------------------------------------------------------
// Real symmetric path: Householder reduction (tred2) + implicit QL (tql2),
// after the classic EISPACK routines.

namespace {

double hypot2(double a, double b) { return std::hypot(a, b); }

void tred2(int n, std::vector<double>& v, std::vector<double>& d, std::vector<double>& e) {
  auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

  for (int j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0, h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (int i = 0; i < n - 1; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (int k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

void tql2(int n, std::vector<double>& v, std::vector<double>& d, std::vector<double>& e) {
  auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0, tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        ++iter;
        if (iter > 80) throw NumericalError("tql2: QL iteration failed to converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = hypot2(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = hypot2(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            h = V(k, i + 1);
            V(k, i + 1) = s * V(k, i) + c * h;
            V(k, i) = c * V(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  // Sort ascending, carrying eigenvectors along.
  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    double p = d[i];
    for (int j = i + 1; j < n; ++j)
      if (d[j] < p) {
        k = j;
        p = d[j];
      }
    if (k != i) {
      d[k] = d[i];
      d[i] = p;
      for (int j = 0; j < n; ++j) std::swap(V(j, i), V(j, k));
    }
  }
}

}  // namespace

void sym_eig(int n, const std::vector<double>& a, std::vector<double>& w,
             std::vector<double>& v) {
  if (static_cast<int>(a.size()) != n * n) throw InputError("sym_eig: bad matrix size");
  v = a;
  w.assign(n, 0.0);
  std::vector<double> e(n, 0.0);
  tred2(n, v, w, e);
  tql2(n, v, w, e);
}

HermitianMatrix psd_project(const HermitianMatrix& m, bool renormalize_trace) {
  Spectrum sp = herm_eig(m);
  double tr = 0.0;
  for (double& lam : sp.eigenvalues) {
    lam = std::max(lam, 0.0);
    tr += lam;
  }
  if (renormalize_trace) {
    if (tr <= 1e-14)
      throw NumericalError("psd_project: zero trace after clipping negative spectrum");
    for (double& lam : sp.eigenvalues) lam /= tr;
  }
  return HermitianMatrix::symmetrized(sp.reconstruct());
}

}  // namespace qrob
