#include "qrob/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "qrob/eig.hpp"
#include "qrob/kernels.hpp"

namespace qrob::sdp {

namespace {

using std::size_t;

// --- small dense helpers (row-major) ---------------------------------------

bool chol_lower(int n, const double* a, double* l) {
  std::memset(l, 0, sizeof(double) * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (s <= 0.0) return false;
        l[i * n + i] = std::sqrt(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  }
  return true;
}

void transpose(int n, const double* a, double* at) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) at[j * n + i] = a[i * n + j];
}

// c = a * b (n x n), overwrite
void mm(int n, const double* a, const double* b, double* c) {
  std::memset(c, 0, sizeof(double) * n * n);
  kern::active().gemm_acc(a, b, c, n, n, n);
}

void symmetrize(int n, double* a) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a[i * n + j] + a[j * n + i]);
      a[i * n + j] = v;
      a[j * n + i] = v;
    }
}

// --- flat block storage -----------------------------------------------------

struct Layout {
  std::vector<int> bsize;
  std::vector<size_t> boff;  // offset of each block in the flat array
  size_t flat = 0;           // sum of bsize^2
  int ntot = 0;              // sum of bsize

  explicit Layout(const Problem& p) {
    for (const auto& b : p.blocks) {
      bsize.push_back(b.size);
      boff.push_back(flat);
      flat += static_cast<size_t>(b.size) * b.size;
      ntot += b.size;
    }
  }
};

double sparse_inner(const Constraint& c, const Layout& lay, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& e : c.a) {
    const int n = lay.bsize[e.blk];
    const double xv = x[lay.boff[e.blk] + static_cast<size_t>(e.r) * n + e.c];
    s += (e.r == e.c) ? e.v * xv : 2.0 * e.v * xv;
  }
  return s;
}

void sparse_axpy(double alpha, const Constraint& c, const Layout& lay, std::vector<double>& x) {
  for (const auto& e : c.a) {
    const int n = lay.bsize[e.blk];
    const size_t o = lay.boff[e.blk];
    x[o + static_cast<size_t>(e.r) * n + e.c] += alpha * e.v;
    if (e.r != e.c) x[o + static_cast<size_t>(e.c) * n + e.r] += alpha * e.v;
  }
}

double flat_dot(const std::vector<double>& a, const std::vector<double>& b) {
  return kern::active().dot(a.data(), b.data(), a.size());
}

// Largest alpha in (0, hi] with diag(sigma) + alpha*D >= 0, by bisection
// on a trial Cholesky. Returns hi when the full step stays PSD.
double max_step_scaled(int n, const std::vector<double>& sigma, const double* d, double hi,
                       std::vector<double>& scratch_m, std::vector<double>& scratch_l) {
  scratch_m.assign(static_cast<size_t>(n) * n, 0.0);
  scratch_l.assign(static_cast<size_t>(n) * n, 0.0);
  auto psd_at = [&](double alpha) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        scratch_m[static_cast<size_t>(i) * n + j] =
            (i == j ? sigma[i] : 0.0) + alpha * d[static_cast<size_t>(i) * n + j];
    return chol_lower(n, scratch_m.data(), scratch_l.data());
  };
  if (psd_at(hi)) return hi;
  double lo = 0.0, up = hi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + up);
    if (psd_at(mid))
      lo = mid;
    else
      up = mid;
  }
  return lo;
}

}  // namespace

int Problem::total_dim() const {
  int n = 0;
  for (const auto& b : blocks) n += b.size;
  return n;
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::PrimalInfeasible: return "PrimalInfeasible";
    case Status::DualInfeasible: return "DualInfeasible";
    case Status::SlowProgress: return "SlowProgress";
  }
  return "Unknown";
}

int Problem::deduplicate_constraints() {
  const int m = static_cast<int>(constraints.size());
  if (m == 0) return 0;
  // Gram matrix of the constraint matrices under the trace inner product.
  auto pair_inner = [&](const Constraint& a, const Constraint& b) {
    double s = 0.0;
    for (const auto& ea : a.a)
      for (const auto& eb : b.a) {
        if (ea.blk != eb.blk) continue;
        if (ea.r == eb.r && ea.c == eb.c) s += (ea.r == ea.c ? 1.0 : 2.0) * ea.v * eb.v;
      }
    return s;
  };

  std::vector<int> kept;
  std::vector<std::vector<double>> gram_kept;  // lower-triangular factor rows
  std::vector<Constraint> out;
  int removed = 0;
  for (int i = 0; i < m; ++i) {
    const double gii = pair_inner(constraints[i], constraints[i]);
    std::vector<double> cross(kept.size());
    for (size_t k = 0; k < kept.size(); ++k)
      cross[k] = pair_inner(constraints[i], constraints[kept[k]]);
    // Forward-substitute against the Cholesky factor of the kept Gram.
    std::vector<double> w(cross.size());
    for (size_t k = 0; k < cross.size(); ++k) {
      double s = cross[k];
      for (size_t j = 0; j < k; ++j) s -= gram_kept[k][j] * w[j];
      w[k] = s / gram_kept[k][k];
    }
    double resid2 = gii;
    for (double v : w) resid2 -= v * v;
    const double tol2 = 1e-20 * std::max(gii, 1.0);
    if (resid2 <= tol2) {
      // Dependent: verify the right-hand side is consistent.
      std::vector<double> alpha(w.size());
      for (int k = static_cast<int>(w.size()) - 1; k >= 0; --k) {
        double s = w[k];
        for (size_t j = k + 1; j < w.size(); ++j) s -= gram_kept[j][k] * alpha[j];
        alpha[k] = s / gram_kept[k][k];
      }
      double bpred = 0.0;
      for (size_t k = 0; k < kept.size(); ++k) bpred += alpha[k] * constraints[kept[k]].b;
      if (std::abs(bpred - constraints[i].b) > 1e-8 * (1.0 + std::abs(constraints[i].b)))
        throw InputError("dependent constraint with inconsistent right-hand side");
      ++removed;
      continue;
    }
    std::vector<double> row = w;
    row.push_back(std::sqrt(resid2));
    gram_kept.push_back(std::move(row));
    kept.push_back(i);
    out.push_back(constraints[i]);
  }
  constraints = std::move(out);
  return removed;
}

Solution solve(const Problem& p, const SolveOptions& opt) {
  const Layout lay(p);
  const int m = static_cast<int>(p.constraints.size());
  const int nb = p.block_count();
  const int ntot = lay.ntot;

  Solution sol;
  sol.y.assign(m, 0.0);

  // Flatten C.
  std::vector<double> C(lay.flat, 0.0);
  for (int b = 0; b < nb; ++b)
    std::copy(p.C[b].begin(), p.C[b].end(), C.begin() + lay.boff[b]);

  double bnorm = 0.0, bmax = 0.0;
  for (const auto& c : p.constraints) {
    bnorm += c.b * c.b;
    bmax = std::max(bmax, std::abs(c.b));
  }
  bnorm = std::sqrt(bnorm);
  double cnorm = std::sqrt(flat_dot(C, C));
  double amax = 0.0;
  for (const auto& c : p.constraints)
    for (const auto& e : c.a) amax = std::max(amax, std::abs(e.v));

  // Initial iterates: scaled identities.
  const double xi_p = std::max(10.0, 5.0 * (1.0 + bmax));
  const double xi_d = std::max(10.0, 5.0 * (1.0 + std::max(cnorm, amax)));
  std::vector<double> X(lay.flat, 0.0), S(lay.flat, 0.0);
  for (int b = 0; b < nb; ++b) {
    const int n = lay.bsize[b];
    for (int i = 0; i < n; ++i) {
      X[lay.boff[b] + static_cast<size_t>(i) * n + i] = xi_p;
      S[lay.boff[b] + static_cast<size_t>(i) * n + i] = xi_d;
    }
  }

  std::vector<double> y(m, 0.0);

  // Work arrays.
  std::vector<double> Rd(lay.flat), rp(m);
  std::vector<double> G(lay.flat), Gt(lay.flat);
  std::vector<std::vector<double>> Ahat(m, std::vector<double>(lay.flat));
  std::vector<double> Rdhat(lay.flat);
  std::vector<double> dXhat(lay.flat), dShat(lay.flat), dX(lay.flat), dS(lay.flat);
  std::vector<double> dXhat_aff(lay.flat), dShat_aff(lay.flat);
  std::vector<double> rhs_comp(lay.flat);
  std::vector<double> sigma_all;  // per block concatenated scaling spectrum
  std::vector<size_t> sig_off(nb);
  std::vector<double> M(static_cast<size_t>(m) * m), Lm(static_cast<size_t>(m) * m);
  std::vector<double> dy(m), h(m), rhs(m);
  std::vector<double> t1, t2, t3, lx, ls, bmat, btb, evec, eval;

  double best_err = std::numeric_limits<double>::infinity();
  Solution best;
  int tiny_steps = 0;

  const double tol_feas = opt.tol_feas;
  const double tol_gap = opt.tol_gap;

  auto record = [&](Status st, int iter, const std::string& msg) {
    Solution out;
    out.status = st;
    out.iterations = iter;
    out.message = msg;
    out.y = y;
    out.X.resize(nb);
    out.S.resize(nb);
    for (int b = 0; b < nb; ++b) {
      const int n = lay.bsize[b];
      out.X[b].assign(X.begin() + lay.boff[b], X.begin() + lay.boff[b] + static_cast<size_t>(n) * n);
      out.S[b].assign(S.begin() + lay.boff[b], S.begin() + lay.boff[b] + static_cast<size_t>(n) * n);
    }
    out.primal_obj = flat_dot(C, X);
    out.dual_obj = 0.0;
    for (int i = 0; i < m; ++i) out.dual_obj += p.constraints[i].b * y[i];
    out.gap = std::abs(out.primal_obj - out.dual_obj);
    out.rel_gap = out.gap / (1.0 + std::abs(out.primal_obj));
    double rp2 = 0.0;
    for (int i = 0; i < m; ++i) {
      const double r = p.constraints[i].b - sparse_inner(p.constraints[i], lay, X);
      rp2 += r * r;
    }
    out.primal_res = std::sqrt(rp2) / (1.0 + bnorm);
    std::vector<double> rd = C;
    kern::active().axpy(-1.0, S.data(), rd.data(), rd.size());
    for (int i = 0; i < m; ++i) sparse_axpy(-y[i], p.constraints[i], lay, rd);
    out.dual_res = std::sqrt(flat_dot(rd, rd)) / (1.0 + cnorm);
    double mu = flat_dot(X, S) / std::max(1, ntot);
    out.mu = mu;
    return out;
  };

  // On breakdown or iteration limit: the newest iterate (or the best seen)
  // may already satisfy the tolerances even though the next scaling step
  // failed; grade it before declaring failure.
  auto finalize = [&](int iter, const std::string& msg) {
    Solution cur = record(Status::SlowProgress, iter, msg);
    if (cur.primal_res <= tol_feas && cur.dual_res <= tol_feas && cur.rel_gap <= tol_gap) {
      cur.status = Status::Optimal;
      return cur;
    }
    Solution out = std::max(cur.primal_res, std::max(cur.dual_res, cur.rel_gap)) <= best_err
                       ? cur
                       : best;
    if (out.primal_res <= tol_feas && out.dual_res <= tol_feas && out.rel_gap <= tol_gap)
      out.status = Status::Optimal;
    else
      out.status = Status::SlowProgress;
    out.message = msg;
    return out;
  };

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    // Residuals.
    for (int i = 0; i < m; ++i)
      rp[i] = p.constraints[i].b - sparse_inner(p.constraints[i], lay, X);
    Rd = C;
    kern::active().axpy(-1.0, S.data(), Rd.data(), Rd.size());
    for (int i = 0; i < m; ++i) sparse_axpy(-y[i], p.constraints[i], lay, Rd);

    const double pobj = flat_dot(C, X);
    double dobj = 0.0;
    for (int i = 0; i < m; ++i) dobj += p.constraints[i].b * y[i];
    const double mu = flat_dot(X, S) / std::max(1, ntot);

    double rp2 = 0.0;
    for (int i = 0; i < m; ++i) rp2 += rp[i] * rp[i];
    const double relp = std::sqrt(rp2) / (1.0 + bnorm);
    const double reld = std::sqrt(flat_dot(Rd, Rd)) / (1.0 + cnorm);
    const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));

    const double err = std::max({relp, reld, relgap});
    if (err < best_err) {
      best_err = err;
      best = record(Status::SlowProgress, iter, "best iterate");
    }

    if (relp <= opt.tol_feas && reld <= opt.tol_feas && relgap <= opt.tol_gap) {
      return record(Status::Optimal, iter, "converged");
    }
    if (dobj > opt.divergence_bound && relp > 1e-4) {
      return record(Status::PrimalInfeasible, iter, "dual objective diverging");
    }
    if (pobj < -opt.divergence_bound && reld > 1e-4) {
      return record(Status::DualInfeasible, iter, "primal objective diverging");
    }

    // NT scaling per block: sigma = joint spectrum, G the scaling factor.
    sigma_all.clear();
    bool scale_ok = true;
    for (int b = 0; b < nb && scale_ok; ++b) {
      const int n = lay.bsize[b];
      const size_t o = lay.boff[b];
      const size_t nn = static_cast<size_t>(n) * n;
      lx.assign(nn, 0.0);
      ls.assign(nn, 0.0);
      // A marginal iterate can lose definiteness to roundoff right at
      // convergence; nudge the diagonal once before giving up.
      auto chol_with_bump = [&](double* mat, double* l) {
        if (chol_lower(n, mat, l)) return true;
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += mat[static_cast<size_t>(i) * n + i];
        const double bump = 1e-12 * std::max(tr / n, 1e-6);
        for (int i = 0; i < n; ++i) mat[static_cast<size_t>(i) * n + i] += bump;
        return chol_lower(n, mat, l);
      };
      if (!chol_with_bump(X.data() + o, lx.data()) || !chol_with_bump(S.data() + o, ls.data())) {
        scale_ok = false;
        break;
      }
      // B = Ls' * Lx ; eigen-decomposition of B'B gives V and sigma^2.
      bmat.assign(nn, 0.0);
      t1.assign(nn, 0.0);
      transpose(n, ls.data(), t1.data());
      mm(n, t1.data(), lx.data(), bmat.data());
      btb.assign(nn, 0.0);
      t2.assign(nn, 0.0);
      transpose(n, bmat.data(), t2.data());
      mm(n, t2.data(), bmat.data(), btb.data());
      symmetrize(n, btb.data());
      std::vector<double> bv(btb.begin(), btb.end());
      sym_eig(n, bv, eval, evec);
      sig_off[b] = sigma_all.size();
      for (int i = 0; i < n; ++i)
        sigma_all.push_back(std::sqrt(std::max(eval[i], 1e-300)));
      // G = Lx * V * Sigma^{-1/2}
      t3.assign(nn, 0.0);
      mm(n, lx.data(), evec.data(), t3.data());
      for (int j = 0; j < n; ++j) {
        const double sc = 1.0 / std::sqrt(sigma_all[sig_off[b] + j]);
        for (int i = 0; i < n; ++i) t3[static_cast<size_t>(i) * n + j] *= sc;
      }
      std::copy(t3.begin(), t3.end(), G.begin() + o);
      transpose(n, t3.data(), t1.data());
      std::copy(t1.begin(), t1.end(), Gt.begin() + o);
    }
    if (!scale_ok) {
      return finalize(iter, "iterate lost positive definiteness");
    }

    // Scaled constraint matrices Ahat_i = G' A_i G (rows of G as outer products).
    for (int i = 0; i < m; ++i) {
      std::fill(Ahat[i].begin(), Ahat[i].end(), 0.0);
      for (const auto& e : p.constraints[i].a) {
        const int n = lay.bsize[e.blk];
        const size_t o = lay.boff[e.blk];
        const double* gr = G.data() + o + static_cast<size_t>(e.r) * n;
        const double* gc = G.data() + o + static_cast<size_t>(e.c) * n;
        double* out = Ahat[i].data() + o;
        if (e.r == e.c) {
          for (int a = 0; a < n; ++a) {
            const double va = e.v * gr[a];
            kern::active().axpy(va, gr, out + static_cast<size_t>(a) * n, n);
          }
        } else {
          for (int a = 0; a < n; ++a) {
            kern::active().axpy(e.v * gr[a], gc, out + static_cast<size_t>(a) * n, n);
            kern::active().axpy(e.v * gc[a], gr, out + static_cast<size_t>(a) * n, n);
          }
        }
      }
    }

    // Rdhat = G' Rd G per block.
    for (int b = 0; b < nb; ++b) {
      const int n = lay.bsize[b];
      const size_t o = lay.boff[b];
      const size_t nn = static_cast<size_t>(n) * n;
      t1.assign(nn, 0.0);
      mm(n, Rd.data() + o, G.data() + o, t1.data());
      t2.assign(nn, 0.0);
      mm(n, Gt.data() + o, t1.data(), t2.data());
      std::copy(t2.begin(), t2.end(), Rdhat.begin() + o);
    }

    // Schur complement M_kj = <Ahat_k, Ahat_j>.
    for (int k = 0; k < m; ++k)
      for (int j = k; j < m; ++j) {
        const double v = flat_dot(Ahat[k], Ahat[j]);
        M[static_cast<size_t>(k) * m + j] = v;
        M[static_cast<size_t>(j) * m + k] = v;
      }
    {
      bool ok = chol_lower(m, M.data(), Lm.data());
      if (!ok) {
        // Tiny ridge; the constraints are checked independent at build time,
        // so this only absorbs roundoff near convergence.
        double tr = 0.0;
        for (int k = 0; k < m; ++k) tr += M[static_cast<size_t>(k) * m + k];
        const double ridge = 1e-13 * std::max(tr / std::max(1, m), 1.0);
        for (int k = 0; k < m; ++k) M[static_cast<size_t>(k) * m + k] += ridge;
        if (!chol_lower(m, M.data(), Lm.data())) {
          return finalize(iter, "Schur complement not positive definite");
        }
      }
    }
    auto solve_schur = [&](const std::vector<double>& r, std::vector<double>& out) {
      out.assign(m, 0.0);
      std::vector<double> z(m, 0.0);
      for (int i = 0; i < m; ++i) {
        double s = r[i];
        for (int k = 0; k < i; ++k) s -= Lm[static_cast<size_t>(i) * m + k] * z[k];
        z[i] = s / Lm[static_cast<size_t>(i) * m + i];
      }
      for (int i = m - 1; i >= 0; --i) {
        double s = z[i];
        for (int k = i + 1; k < m; ++k) s -= Lm[static_cast<size_t>(k) * m + i] * out[k];
        out[i] = s / Lm[static_cast<size_t>(i) * m + i];
      }
    };

    auto kweight = [&](int b, int i, int j) {
      const double si = sigma_all[sig_off[b] + i];
      const double sj = sigma_all[sig_off[b] + j];
      return 2.0 / (si + sj);
    };

    // One Newton solve for a given complementarity right-hand side.
    auto newton = [&](const std::vector<double>& comp, std::vector<double>& oy,
                      std::vector<double>& oxhat, std::vector<double>& oshat) {
      // h_k = <Ahat_k, K o comp - Rdhat>
      std::vector<double> kc(lay.flat);
      for (int b = 0; b < nb; ++b) {
        const int n = lay.bsize[b];
        const size_t o = lay.boff[b];
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            kc[o + static_cast<size_t>(i) * n + j] =
                kweight(b, i, j) * comp[o + static_cast<size_t>(i) * n + j] -
                Rdhat[o + static_cast<size_t>(i) * n + j];
      }
      for (int k = 0; k < m; ++k) h[k] = flat_dot(Ahat[k], kc);
      for (int k = 0; k < m; ++k) rhs[k] = rp[k] - h[k];
      solve_schur(rhs, oy);
      // dShat = Rdhat - sum dy Ahat ; dXhat = K o comp - dShat
      oshat = Rdhat;
      for (int k = 0; k < m; ++k)
        kern::active().axpy(-oy[k], Ahat[k].data(), oshat.data(), lay.flat);
      oxhat.resize(lay.flat);
      for (int b = 0; b < nb; ++b) {
        const int n = lay.bsize[b];
        const size_t o = lay.boff[b];
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            oxhat[o + static_cast<size_t>(i) * n + j] =
                kweight(b, i, j) * comp[o + static_cast<size_t>(i) * n + j] -
                oshat[o + static_cast<size_t>(i) * n + j];
      }
    };

    // Predictor: comp = -Sigma^2 (diagonal).
    std::fill(rhs_comp.begin(), rhs_comp.end(), 0.0);
    for (int b = 0; b < nb; ++b) {
      const int n = lay.bsize[b];
      const size_t o = lay.boff[b];
      for (int i = 0; i < n; ++i) {
        const double s = sigma_all[sig_off[b] + i];
        rhs_comp[o + static_cast<size_t>(i) * n + i] = -s * s;
      }
    }
    newton(rhs_comp, dy, dXhat_aff, dShat_aff);

    // Affine step lengths in scaled space (Xhat = Shat = Sigma).
    const double hi = 1.0 / opt.step_frac;
    double ap_aff = 1.0, ad_aff = 1.0;
    for (int b = 0; b < nb; ++b) {
      const int n = lay.bsize[b];
      const size_t o = lay.boff[b];
      std::vector<double> sig(sigma_all.begin() + sig_off[b], sigma_all.begin() + sig_off[b] + n);
      ap_aff = std::min(ap_aff, max_step_scaled(n, sig, dXhat_aff.data() + o, hi, t1, t2));
      ad_aff = std::min(ad_aff, max_step_scaled(n, sig, dShat_aff.data() + o, hi, t1, t2));
    }
    ap_aff = std::min(1.0, ap_aff);
    ad_aff = std::min(1.0, ad_aff);

    // mu after the affine step, computed in scaled space.
    double mu_aff = 0.0;
    for (int b = 0; b < nb; ++b) {
      const int n = lay.bsize[b];
      const size_t o = lay.boff[b];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double xs = (i == j ? sigma_all[sig_off[b] + i] : 0.0) +
                            ap_aff * dXhat_aff[o + static_cast<size_t>(i) * n + j];
          const double ss = (i == j ? sigma_all[sig_off[b] + i] : 0.0) +
                            ad_aff * dShat_aff[o + static_cast<size_t>(i) * n + j];
          mu_aff += xs * ss;
        }
    }
    mu_aff /= std::max(1, ntot);
    double sigma_c = std::pow(std::max(mu_aff, 0.0) / std::max(mu, 1e-300), 3);
    sigma_c = std::min(1.0, std::max(0.0, sigma_c));

    // Corrector: comp = sigma*mu*I - Sigma^2 - sym(dXhat_aff * dShat_aff).
    for (int b = 0; b < nb; ++b) {
      const int n = lay.bsize[b];
      const size_t o = lay.boff[b];
      const size_t nn = static_cast<size_t>(n) * n;
      t1.assign(nn, 0.0);
      kern::active().gemm_acc(dXhat_aff.data() + o, dShat_aff.data() + o, t1.data(), n, n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double cross =
              0.5 * (t1[static_cast<size_t>(i) * n + j] + t1[static_cast<size_t>(j) * n + i]);
          double v = -cross;
          if (i == j) {
            const double s = sigma_all[sig_off[b] + i];
            v += sigma_c * mu - s * s;
          }
          rhs_comp[o + static_cast<size_t>(i) * n + j] = v;
        }
    }
    newton(rhs_comp, dy, dXhat, dShat);

    // Directions in the original space.
    for (int b = 0; b < nb; ++b) {
      const int n = lay.bsize[b];
      const size_t o = lay.boff[b];
      const size_t nn = static_cast<size_t>(n) * n;
      t1.assign(nn, 0.0);
      mm(n, G.data() + o, dXhat.data() + o, t1.data());
      t2.assign(nn, 0.0);
      mm(n, t1.data(), Gt.data() + o, t2.data());
      symmetrize(n, t2.data());
      std::copy(t2.begin(), t2.end(), dX.begin() + o);
    }
    dS = Rd;
    for (int k = 0; k < m; ++k) sparse_axpy(-dy[k], p.constraints[k], lay, dS);

    // Step lengths with the fraction-to-boundary factor.
    double ap = 1.0, ad = 1.0;
    for (int b = 0; b < nb; ++b) {
      const int n = lay.bsize[b];
      const size_t o = lay.boff[b];
      std::vector<double> sig(sigma_all.begin() + sig_off[b], sigma_all.begin() + sig_off[b] + n);
      ap = std::min(ap, max_step_scaled(n, sig, dXhat.data() + o, hi, t1, t2));
      ad = std::min(ad, max_step_scaled(n, sig, dShat.data() + o, hi, t1, t2));
    }
    ap = std::min(1.0, opt.step_frac * ap);
    ad = std::min(1.0, opt.step_frac * ad);

    if (ap < 1e-7 && ad < 1e-7) {
      ++tiny_steps;
      if (tiny_steps >= 5) {
        return finalize(iter, "step lengths collapsed");
      }
    } else {
      tiny_steps = 0;
    }

    kern::active().axpy(ap, dX.data(), X.data(), lay.flat);
    for (int k = 0; k < m; ++k) y[k] += ad * dy[k];
    kern::active().axpy(ad, dS.data(), S.data(), lay.flat);
    for (int b = 0; b < nb; ++b) {
      symmetrize(lay.bsize[b], X.data() + lay.boff[b]);
      symmetrize(lay.bsize[b], S.data() + lay.boff[b]);
    }
  }

  return finalize(opt.max_iter, "iteration limit reached");
}

bool CertReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

CertReport validate_certificates(const Problem& p, const Solution& s) {
  CertReport rep;
  const Layout lay(p);
  const int m = static_cast<int>(p.constraints.size());

  std::vector<double> X(lay.flat, 0.0), Sd(lay.flat, 0.0), C(lay.flat, 0.0);
  for (int b = 0; b < p.block_count(); ++b) {
    std::copy(s.X[b].begin(), s.X[b].end(), X.begin() + lay.boff[b]);
    std::copy(s.S[b].begin(), s.S[b].end(), Sd.begin() + lay.boff[b]);
    std::copy(p.C[b].begin(), p.C[b].end(), C.begin() + lay.boff[b]);
  }

  double bnorm = 0.0;
  for (const auto& c : p.constraints) bnorm += c.b * c.b;
  bnorm = std::sqrt(bnorm);
  double rp2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const double r = p.constraints[i].b - sparse_inner(p.constraints[i], lay, X);
    rp2 += r * r;
  }
  const double prim_res = std::sqrt(rp2);
  rep.checks.push_back({"primal_feasibility", prim_res <= 1e-8 * (1.0 + bnorm), prim_res,
                        1e-8 * (1.0 + bnorm)});

  std::vector<double> rd = C;
  kern::active().axpy(-1.0, Sd.data(), rd.data(), rd.size());
  for (int i = 0; i < m; ++i) sparse_axpy(-s.y[i], p.constraints[i], lay, rd);
  const double dual_res = std::sqrt(flat_dot(rd, rd));
  const double cnorm = std::sqrt(flat_dot(C, C));
  rep.checks.push_back(
      {"dual_feasibility", dual_res <= 1e-8 * (1.0 + cnorm), dual_res, 1e-8 * (1.0 + cnorm)});

  double min_x = std::numeric_limits<double>::infinity();
  double min_s = std::numeric_limits<double>::infinity();
  std::vector<double> w, v;
  for (int b = 0; b < p.block_count(); ++b) {
    const int n = lay.bsize[b];
    sym_eig(n, s.X[b], w, v);
    min_x = std::min(min_x, w.front());
    sym_eig(n, s.S[b], w, v);
    min_s = std::min(min_s, w.front());
  }
  rep.checks.push_back({"X_psd", min_x >= -1e-9, min_x, -1e-9});
  rep.checks.push_back({"S_psd", min_s >= -1e-9, min_s, -1e-9});

  const double pobj = flat_dot(C, X);
  double dobj = 0.0;
  for (int i = 0; i < m; ++i) dobj += p.constraints[i].b * s.y[i];
  const double gap = std::abs(pobj - dobj);
  rep.checks.push_back({"duality_gap", gap <= 1e-7 * (1.0 + std::abs(pobj)), gap,
                        1e-7 * (1.0 + std::abs(pobj))});
  return rep;
}

std::vector<double> hermitian_embedding(const ComplexMatrix& h) {
  const int d = h.dim;
  const int n = 2 * d;
  std::vector<double> out(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double re = h.re[h.idx(i, j)];
      const double im = h.im[h.idx(i, j)];
      out[static_cast<size_t>(i) * n + j] = re;
      out[static_cast<size_t>(d + i) * n + (d + j)] = re;
      out[static_cast<size_t>(i) * n + (d + j)] = -im;
      out[static_cast<size_t>(d + i) * n + j] = im;
    }
  return out;
}

int add_block(Problem& p, int size, bool embedded) {
  p.blocks.push_back({size, embedded});
  p.C.emplace_back(static_cast<size_t>(size) * size, 0.0);
  return static_cast<int>(p.blocks.size()) - 1;
}

void add_objective_embedded(Problem& p, int blk, const ComplexMatrix& k, double scale) {
  const auto emb = hermitian_embedding(k);
  const int n = p.blocks[blk].size;
  if (static_cast<int>(emb.size()) != n * n)
    throw InputError("objective dimension does not match block");
  for (size_t i = 0; i < emb.size(); ++i) p.C[blk][i] += 0.5 * scale * emb[i];
}

void add_objective_scalar(Problem& p, int blk, double v) {
  if (p.blocks[blk].size != 1) throw InputError("scalar objective on non-scalar block");
  p.C[blk][0] += v;
}

void add_coeff_embedded(Constraint& c, const Problem& p, int blk, const ComplexMatrix& k,
                        double scale) {
  const int d = k.dim;
  if (p.blocks[blk].size != 2 * d) throw InputError("coefficient dim does not match block");
  const double f = 0.5 * scale;
  for (int i = 0; i < d; ++i) {
    const double di = k.re[k.idx(i, i)];
    if (di != 0.0) {
      c.a.push_back({blk, i, i, f * di});
      c.a.push_back({blk, d + i, d + i, f * di});
    }
    for (int j = i + 1; j < d; ++j) {
      const double x = k.re[k.idx(i, j)];
      const double yv = k.im[k.idx(i, j)];
      if (x != 0.0) {
        c.a.push_back({blk, i, j, f * x});
        c.a.push_back({blk, d + i, d + j, f * x});
      }
      if (yv != 0.0) {
        c.a.push_back({blk, i, d + j, -f * yv});
        c.a.push_back({blk, j, d + i, f * yv});
      }
    }
  }
}

void add_coeff_scalar(Constraint& c, int blk, double v) { c.a.push_back({blk, 0, 0, v}); }

ComplexMatrix extract_hermitian(const std::vector<double>& block, int herm_dim) {
  const int d = herm_dim;
  const int n = 2 * d;
  if (static_cast<int>(block.size()) != n * n)
    throw InputError("extract_hermitian: block size mismatch");
  ComplexMatrix out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double re = 0.5 * (block[static_cast<size_t>(i) * n + j] +
                               block[static_cast<size_t>(d + i) * n + (d + j)]);
      const double im = 0.5 * (block[static_cast<size_t>(d + i) * n + j] -
                               block[static_cast<size_t>(i) * n + (d + j)]);
      out.re[out.idx(i, j)] = re;
      out.im[out.idx(i, j)] = im;
    }
  return out;
}

}  // namespace qrob::sdp
