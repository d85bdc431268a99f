#include "qrob/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrob/kernels.hpp"

namespace qrob {

namespace {

int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

// Mixed-radix digits of index i for the given dims, party 0 most significant.
void decode(int i, const std::vector<int>& dims, int* digits) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    digits[k] = i % dims[k];
    i /= dims[k];
  }
}

int encode(const int* digits, const std::vector<int>& dims) {
  int i = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) i = i * dims[k] + digits[k];
  return i;
}

}  // namespace

int Ket::dim() const {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

double Ket::norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < re.size(); ++i) s += re[i] * re[i] + im[i] * im[i];
  return std::sqrt(s);
}

void Ket::normalize() {
  const double n = norm();
  if (n <= 0.0) throw InputError("cannot normalize zero ket");
  for (std::size_t i = 0; i < re.size(); ++i) {
    re[i] /= n;
    im[i] /= n;
  }
}

cplx ket_inner(const Ket& a, const Ket& b) {
  if (a.re.size() != b.re.size()) throw InputError("ket_inner: dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.re.size(); ++i)
    s += std::conj(cplx{a.re[i], a.im[i]}) * cplx{b.re[i], b.im[i]};
  return s;
}

Ket ket_tensor(const Ket& a, const Ket& b) {
  Ket r;
  r.dims = a.dims;
  r.dims.insert(r.dims.end(), b.dims.begin(), b.dims.end());
  const int da = a.dim(), db = b.dim();
  r.re.resize(static_cast<std::size_t>(da) * db);
  r.im.resize(static_cast<std::size_t>(da) * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) {
      const cplx v = a.amp(i) * b.amp(j);
      r.re[static_cast<std::size_t>(i) * db + j] = v.real();
      r.im[static_cast<std::size_t>(i) * db + j] = v.imag();
    }
  return r;
}

DensityMatrix DensityMatrix::from_matrix(const HermitianMatrix& m, std::vector<int> dims) {
  if (dims.empty()) dims = {m.dim()};
  if (product(dims) != m.dim())
    throw InputError("density matrix: subsystem dims do not multiply to the matrix dim");
  const double tr = trace(m.mat()).real();
  if (std::abs(tr - 1.0) > 1e-10)
    throw InputError("density matrix: trace " + std::to_string(tr) + " is not 1");
  const double lam = min_eigenvalue(m);
  if (lam < -1e-10)
    throw InputError("density matrix: negative eigenvalue " + std::to_string(lam));
  DensityMatrix rho;
  rho.m_ = m;
  rho.dims_ = std::move(dims);
  return rho;
}

DensityMatrix DensityMatrix::unchecked(HermitianMatrix m, std::vector<int> dims) {
  DensityMatrix rho;
  rho.m_ = std::move(m);
  rho.dims_ = std::move(dims);
  return rho;
}

DensityMatrix projector(const Ket& psi) {
  const int d = psi.dim();
  ComplexMatrix m(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const cplx v = psi.amp(i) * std::conj(psi.amp(j));
      m.set(i, j, v);
    }
  return DensityMatrix::unchecked(HermitianMatrix::symmetrized(m), psi.dims);
}

DensityMatrix maximally_mixed(const std::vector<int>& dims) {
  const int d = product(dims);
  ComplexMatrix m = ComplexMatrix::identity(d);
  m *= 1.0 / d;
  return DensityMatrix::unchecked(HermitianMatrix::symmetrized(m), dims);
}

std::vector<int> Bipartition::member_list() const {
  std::vector<int> out;
  for (int i = 0; i < parties; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::string Bipartition::label() const {
  std::string a, b;
  for (int i = 0; i < parties; ++i) (contains(i) ? a : b) += static_cast<char>('0' + i);
  return a + "|" + b;
}

std::vector<Bipartition> enumerate_bipartitions(int n) {
  if (n < 2) throw InputError("bipartitions need at least two parties");
  std::vector<Bipartition> out;
  std::vector<std::vector<int>> memberships;
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t m = 1; m < full; ++m) {
    if (!(m & 1u)) continue;  // canonical: contains party 0
    Bipartition b{n, m};
    out.push_back(b);
    memberships.push_back(b.member_list());
  }
  std::vector<int> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return memberships[i] < memberships[j]; });
  std::vector<Bipartition> sorted;
  sorted.reserve(out.size());
  for (int i : order) sorted.push_back(out[i]);
  return sorted;
}

Ket ket_ghz() {
  Ket k;
  k.dims = {2, 2, 2};
  k.re.assign(8, 0.0);
  k.im.assign(8, 0.0);
  const double a = 1.0 / std::sqrt(2.0);
  k.re[0] = a;
  k.re[7] = a;
  return k;
}

Ket ket_w() {
  Ket k;
  k.dims = {2, 2, 2};
  k.re.assign(8, 0.0);
  k.im.assign(8, 0.0);
  const double a = 1.0 / std::sqrt(3.0);
  k.re[1] = a;  // |001>
  k.re[2] = a;  // |010>
  k.re[4] = a;  // |100>
  return k;
}

Ket ket_bell() {
  Ket k;
  k.dims = {2, 2};
  k.re.assign(4, 0.0);
  k.im.assign(4, 0.0);
  const double a = 1.0 / std::sqrt(2.0);
  k.re[0] = a;
  k.re[3] = a;
  return k;
}

Ket basis_ket(const std::vector<int>& dims, int index) {
  Ket k;
  k.dims = dims;
  const int d = product(dims);
  if (index < 0 || index >= d) throw InputError("basis_ket: index out of range");
  k.re.assign(d, 0.0);
  k.im.assign(d, 0.0);
  k.re[index] = 1.0;
  return k;
}

DensityMatrix ghz_w_family(double q) {
  if (q < 0.0 || q > 1.0) throw InputError("ghz_w_family: q must lie in [0,1]");
  const DensityMatrix g = projector(ket_ghz());
  const DensityMatrix w = projector(ket_w());
  ComplexMatrix m = q * ComplexMatrix(g.matrix().mat()) + (1.0 - q) * w.matrix().mat();
  return DensityMatrix::unchecked(HermitianMatrix::symmetrized(m), {2, 2, 2});
}

DensityMatrix white_noise_mix(const DensityMatrix& rho, double p) {
  if (p < 0.0 || p > 1.0) throw InputError("white_noise_mix: p must lie in [0,1]");
  const int d = rho.dim();
  ComplexMatrix m = p * ComplexMatrix(rho.matrix().mat());
  for (int i = 0; i < d; ++i) m.re[m.idx(i, i)] += (1.0 - p) / d;
  return DensityMatrix::unchecked(HermitianMatrix::symmetrized(m), rho.dims());
}

StateFamily family_ghz_w() {
  return {"ghz-w", {2, 2, 2}, [](double q) { return ghz_w_family(q); }};
}

StateFamily family_werner() {
  return {"werner", {2, 2}, [](double q) {
            return white_noise_mix(projector(ket_bell()), q);
          }};
}

StateFamily family_constant_mixed() {
  return {"constant-mixed", {2, 2}, [](double) { return maximally_mixed({2, 2}); }};
}

HermitianMatrix partial_transpose(const HermitianMatrix& m, const std::vector<int>& dims,
                                  const Bipartition& cut) {
  if (cut.parties != static_cast<int>(dims.size()))
    throw InputError("partial_transpose: bipartition party count does not match dims");
  const int d = m.dim();
  const int n = cut.parties;
  ComplexMatrix out(d);
  std::vector<int> ri(n), ci(n), rr(n), cc(n);
  for (int r = 0; r < d; ++r) {
    decode(r, dims, ri.data());
    for (int c = 0; c < d; ++c) {
      decode(c, dims, ci.data());
      rr = ri;
      cc = ci;
      for (int t = 0; t < n; ++t)
        if (cut.contains(t)) std::swap(rr[t], cc[t]);
      out.set(encode(rr.data(), dims), encode(cc.data(), dims), m.at(r, c));
    }
  }
  return HermitianMatrix::symmetrized(out);
}

HermitianMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& cut) {
  return partial_transpose(rho.matrix(), rho.dims(), cut);
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  if (keep.empty()) throw InputError("partial_trace: keep set must be nonempty");
  const auto& dims = rho.dims();
  const int n = rho.parties();
  for (int p : keep)
    if (p < 0 || p >= n) throw InputError("partial_trace: party index out of range");

  std::vector<int> keep_dims, drop;
  for (int p : keep) keep_dims.push_back(dims[p]);
  for (int p = 0; p < n; ++p)
    if (std::find(keep.begin(), keep.end(), p) == keep.end()) drop.push_back(p);

  const int dk = product(keep_dims);
  ComplexMatrix out(dk);
  const int d = rho.dim();
  std::vector<int> ri(n), ci(n);
  for (int r = 0; r < d; ++r) {
    decode(r, dims, ri.data());
    for (int c = 0; c < d; ++c) {
      decode(c, dims, ci.data());
      bool diagonal = true;
      for (int p : drop)
        if (ri[p] != ci[p]) {
          diagonal = false;
          break;
        }
      if (!diagonal) continue;
      int rk = 0, ck = 0;
      for (std::size_t t = 0; t < keep.size(); ++t) {
        rk = rk * keep_dims[t] + ri[keep[t]];
        ck = ck * keep_dims[t] + ci[keep[t]];
      }
      out.add_at(rk, ck, rho.matrix().at(r, c));
    }
  }
  return DensityMatrix::unchecked(HermitianMatrix::symmetrized(out), keep_dims);
}

DensityMatrix random_density(int dim, int rank, std::uint64_t seed, std::vector<int> dims) {
  if (rank < 1 || rank > dim) throw InputError("random_density: rank must lie in [1, dim]");
  if (dims.empty()) dims = {dim};
  if (product(dims) != dim) throw InputError("random_density: dims do not match dim");
  Rng rng(seed);
  // G: dim x rank complex Gaussian, row-major split.
  std::vector<double> gr(static_cast<std::size_t>(dim) * rank), gi(gr.size());
  for (std::size_t i = 0; i < gr.size(); ++i) {
    gr[i] = rng.gaussian();
    gi[i] = rng.gaussian();
  }
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < rank; ++k) {
        const cplx a{gr[static_cast<std::size_t>(i) * rank + k],
                     gi[static_cast<std::size_t>(i) * rank + k]};
        const cplx b{gr[static_cast<std::size_t>(j) * rank + k],
                     gi[static_cast<std::size_t>(j) * rank + k]};
        s += a * std::conj(b);
      }
      m.set(i, j, s);
    }
  const double tr = trace(m).real();
  m *= 1.0 / tr;
  return DensityMatrix::unchecked(HermitianMatrix::symmetrized(m), std::move(dims));
}

Ket random_ket(const std::vector<int>& dims, Rng& rng) {
  Ket k;
  k.dims = dims;
  const int d = product(dims);
  k.re.resize(d);
  k.im.resize(d);
  for (int i = 0; i < d; ++i) {
    k.re[i] = rng.gaussian();
    k.im[i] = rng.gaussian();
  }
  k.normalize();
  return k;
}

Ket random_product_ket(const std::vector<int>& dims, const std::vector<std::vector<int>>& groups,
                       Rng& rng) {
  const int n = static_cast<int>(dims.size());
  // Draw one Haar factor per group, then place amplitudes by party index.
  std::vector<Ket> factors;
  factors.reserve(groups.size());
  for (const auto& g : groups) {
    std::vector<int> gd;
    for (int p : g) gd.push_back(dims[p]);
    factors.push_back(random_ket(gd, rng));
  }
  Ket out;
  out.dims = dims;
  const int d = product(dims);
  out.re.assign(d, 0.0);
  out.im.assign(d, 0.0);
  std::vector<int> digits(n);
  for (int i = 0; i < d; ++i) {
    decode(i, dims, digits.data());
    cplx v = 1.0;
    for (std::size_t t = 0; t < groups.size(); ++t) {
      int gi = 0;
      for (int p : groups[t]) gi = gi * dims[p] + digits[p];
      v *= factors[t].amp(gi);
    }
    out.re[i] = v.real();
    out.im[i] = v.imag();
  }
  return out;
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  // Gaussian matrix, then modified Gram-Schmidt with a phase convention
  // that makes the distribution Haar.
  ComplexMatrix g(dim);
  for (std::size_t i = 0; i < g.re.size(); ++i) {
    g.re[i] = rng.gaussian();
    g.im[i] = rng.gaussian();
  }
  ComplexMatrix q(dim);
  for (int j = 0; j < dim; ++j) {
    std::vector<cplx> col(dim);
    for (int i = 0; i < dim; ++i) col[i] = g.at(i, j);
    for (int k = 0; k < j; ++k) {
      cplx proj = 0.0;
      for (int i = 0; i < dim; ++i) proj += std::conj(q.at(i, k)) * col[i];
      for (int i = 0; i < dim; ++i) col[i] -= proj * q.at(i, k);
    }
    double nn = 0.0;
    for (int i = 0; i < dim; ++i) nn += std::norm(col[i]);
    nn = std::sqrt(nn);
    // Phase fix: make the leading nonzero entry's phase that of the input.
    cplx phase{1.0, 0.0};
    if (std::abs(col[0]) > 1e-300) phase = col[0] / std::abs(col[0]);
    for (int i = 0; i < dim; ++i) q.set(i, j, col[i] / (nn * phase));
  }
  return q;
}

double purity(const DensityMatrix& rho) { return hs_inner(rho.matrix(), rho.matrix()); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  const HermitianMatrix d = herm_sub(a.matrix(), b.matrix());
  const Spectrum sp = herm_eig(d);
  double s = 0.0;
  for (double lam : sp.eigenvalues) s += std::abs(lam);
  return 0.5 * s;
}

double fidelity_with_pure(const Ket& psi, const DensityMatrix& rho) {
  const int d = psi.dim();
  std::vector<double> yr(d, 0.0), yi(d, 0.0);
  kern::active().zgemv_acc(rho.matrix().mat().re.data(), rho.matrix().mat().im.data(),
                           psi.re.data(), psi.im.data(), yr.data(), yi.data(), d, d);
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += psi.re[i] * yr[i] + psi.im[i] * yi[i];
  return s;
}

}  // namespace qrob
