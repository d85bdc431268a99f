#include "qrob/separability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrob/eig.hpp"

namespace qrob {

namespace {

int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

// Orthonormal Hermitian basis of d x d matrices: E_ii, then
// (E_ij + E_ji)/sqrt2 and i(E_ij - E_ji)/sqrt2 for i < j.
std::vector<ComplexMatrix> hermitian_basis(int d) {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(d) * d);
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    ComplexMatrix f(d);
    f.re[f.idx(i, i)] = 1.0;
    out.push_back(std::move(f));
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      ComplexMatrix fr(d);
      fr.re[fr.idx(i, j)] = r;
      fr.re[fr.idx(j, i)] = r;
      out.push_back(std::move(fr));
      ComplexMatrix fi(d);
      fi.im[fi.idx(i, j)] = r;
      fi.im[fi.idx(j, i)] = -r;
      out.push_back(std::move(fi));
    }
  return out;
}

double inner_with(const ComplexMatrix& f, const ComplexMatrix& h) {
  // both Hermitian: real part of Tr(f h)
  double s = 0.0;
  for (std::size_t i = 0; i < f.re.size(); ++i) s += f.re[i] * h.re[i] + f.im[i] * h.im[i];
  return s;
}

void check_dims(const DensityMatrix& rho, const SeparabilityModel& m) {
  if (rho.dims() != m.dims)
    throw InputError("state dimensions do not match the separability model");
}

}  // namespace

SeparabilityModel SeparabilityModel::exact_two_qubit(const std::vector<int>& dims) {
  if (dims.size() != 2) throw InputError("ExactTwoQubit needs exactly two parties");
  const int a = std::min(dims[0], dims[1]);
  const int b = std::max(dims[0], dims[1]);
  if (!(a == 2 && (b == 2 || b == 3)))
    throw InputError("ExactTwoQubit only covers 2x2 and 2x3 systems");
  SeparabilityModel m;
  m.kind = ModelKind::ExactTwoQubit;
  m.dims = dims;
  m.cuts = enumerate_bipartitions(2);
  return m;
}

SeparabilityModel SeparabilityModel::intersect_ppt(const std::vector<int>& dims) {
  SeparabilityModel m;
  m.kind = ModelKind::IntersectPPT;
  m.dims = dims;
  m.cuts = enumerate_bipartitions(static_cast<int>(dims.size()));
  return m;
}

SeparabilityModel SeparabilityModel::mixture_ppt(const std::vector<int>& dims) {
  SeparabilityModel m;
  m.kind = ModelKind::MixturePPT;
  m.dims = dims;
  m.cuts = enumerate_bipartitions(static_cast<int>(dims.size()));
  return m;
}

int SeparabilityModel::dim() const { return product(dims); }

std::string SeparabilityModel::tag() const {
  switch (kind) {
    case ModelKind::ExactTwoQubit: return "exact2q";
    case ModelKind::IntersectPPT: return "ppt-intersect";
    case ModelKind::MixturePPT: return "ppt-mixture";
  }
  return "?";
}

const char* normalization_name(WitnessNormalization n) {
  return n == WitnessNormalization::TraceD ? "trace-d" : "bounded-by-identity";
}

// ---------------------------------------------------------------------------
// Program builders.

ConeProgram build_rr_primal(const DensityMatrix& rho, const SeparabilityModel& m) {
  check_dims(rho, m);
  const int d = m.dim();
  ConeProgram prog;
  prog.kind = ProgramKind::RrPrimal;
  prog.model = m;
  prog.rho = rho;
  sdp::Problem& p = prog.problem;
  p.name = "rr-primal-" + m.tag();

  const auto basis = hermitian_basis(d);
  const ComplexMatrix eye = ComplexMatrix::identity(d);

  prog.s_block = sdp::add_block(p, 1, false);
  sdp::add_objective_scalar(p, prog.s_block, 1.0);

  if (m.kind == ModelKind::MixturePPT) {
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      prog.x_blocks.push_back(sdp::add_block(p, 2 * d, true));   // Y_M
      prog.xt_blocks.push_back(sdp::add_block(p, 2 * d, true));  // Z_M = Y_M^{T_M}
    }
    // ties: <F, Z_M> - <F^{T_M}, Y_M> = 0
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      for (const auto& f : basis) {
        const auto fpt = partial_transpose(HermitianMatrix::symmetrized(f), m.dims, m.cuts[t]);
        sdp::Constraint c;
        sdp::add_coeff_embedded(c, p, prog.xt_blocks[t], f);
        sdp::add_coeff_embedded(c, p, prog.x_blocks[t], fpt.mat(), -1.0);
        c.b = 0.0;
        p.constraints.push_back(std::move(c));
      }
    }
    // sum_M Y_M - s I/d = rho
    for (const auto& f : basis) {
      sdp::Constraint c;
      for (int blk : prog.x_blocks) sdp::add_coeff_embedded(c, p, blk, f);
      sdp::add_coeff_scalar(c, prog.s_block, -inner_with(f, eye) / d);
      c.b = inner_with(f, rho.matrix().mat());
      p.constraints.push_back(std::move(c));
    }
  } else {
    // V0 = rho + s I/d and V_M = rho^{T_M} + s I/d, all PSD.
    const int v0 = sdp::add_block(p, 2 * d, true);
    prog.p_block = v0;
    std::vector<HermitianMatrix> rpt;
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      prog.x_blocks.push_back(sdp::add_block(p, 2 * d, true));
      rpt.push_back(partial_transpose(rho, m.cuts[t]));
    }
    for (const auto& f : basis) {
      const double fid = inner_with(f, eye) / d;
      {
        sdp::Constraint c;
        sdp::add_coeff_embedded(c, p, v0, f);
        sdp::add_coeff_scalar(c, prog.s_block, -fid);
        c.b = inner_with(f, rho.matrix().mat());
        p.constraints.push_back(std::move(c));
      }
      for (std::size_t t = 0; t < m.cuts.size(); ++t) {
        sdp::Constraint c;
        sdp::add_coeff_embedded(c, p, prog.x_blocks[t], f);
        sdp::add_coeff_scalar(c, prog.s_block, -fid);
        c.b = inner_with(f, rpt[t].mat());
        p.constraints.push_back(std::move(c));
      }
    }
  }
  return prog;
}

ConeProgram build_gr_primal(const DensityMatrix& rho, const SeparabilityModel& m) {
  check_dims(rho, m);
  const int d = m.dim();
  ConeProgram prog;
  prog.kind = ProgramKind::GrPrimal;
  prog.model = m;
  prog.rho = rho;
  sdp::Problem& p = prog.problem;
  p.name = "gr-primal-" + m.tag();

  const auto basis = hermitian_basis(d);
  const ComplexMatrix eye = ComplexMatrix::identity(d);

  prog.pi_block = sdp::add_block(p, 2 * d, true);
  sdp::add_objective_embedded(p, prog.pi_block, eye);  // Tr(Pi)

  if (m.kind == ModelKind::MixturePPT) {
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      prog.x_blocks.push_back(sdp::add_block(p, 2 * d, true));
      prog.xt_blocks.push_back(sdp::add_block(p, 2 * d, true));
    }
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      for (const auto& f : basis) {
        const auto fpt = partial_transpose(HermitianMatrix::symmetrized(f), m.dims, m.cuts[t]);
        sdp::Constraint c;
        sdp::add_coeff_embedded(c, p, prog.xt_blocks[t], f);
        sdp::add_coeff_embedded(c, p, prog.x_blocks[t], fpt.mat(), -1.0);
        c.b = 0.0;
        p.constraints.push_back(std::move(c));
      }
    }
    // sum_M Y_M - Pi = rho
    for (const auto& f : basis) {
      sdp::Constraint c;
      for (int blk : prog.x_blocks) sdp::add_coeff_embedded(c, p, blk, f);
      sdp::add_coeff_embedded(c, p, prog.pi_block, f, -1.0);
      c.b = inner_with(f, rho.matrix().mat());
      p.constraints.push_back(std::move(c));
    }
  } else {
    // V_M = (rho + Pi)^{T_M}  <=>  <F, V_M> - <F^{T_M}, Pi> = <F, rho^{T_M}>
    for (std::size_t t = 0; t < m.cuts.size(); ++t)
      prog.x_blocks.push_back(sdp::add_block(p, 2 * d, true));
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      const auto rpt = partial_transpose(rho, m.cuts[t]);
      for (const auto& f : basis) {
        const auto fpt = partial_transpose(HermitianMatrix::symmetrized(f), m.dims, m.cuts[t]);
        sdp::Constraint c;
        sdp::add_coeff_embedded(c, p, prog.x_blocks[t], f);
        sdp::add_coeff_embedded(c, p, prog.pi_block, fpt.mat(), -1.0);
        c.b = inner_with(f, rpt.mat());
        p.constraints.push_back(std::move(c));
      }
    }
  }
  return prog;
}

ConeProgram build_rr_dual(const DensityMatrix& rho, const SeparabilityModel& m) {
  check_dims(rho, m);
  const int d = m.dim();
  ConeProgram prog;
  prog.kind = ProgramKind::RrDual;
  prog.model = m;
  prog.rho = rho;
  prog.value_sign = -1.0;
  sdp::Problem& p = prog.problem;
  p.name = "rr-dual-" + m.tag();

  const auto basis = hermitian_basis(d);
  const ComplexMatrix eye = ComplexMatrix::identity(d);

  if (m.kind == ModelKind::MixturePPT) {
    // Per-partition decomposable: W = P_M + Q_M^{T_M} for every M.
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      prog.xt_blocks.push_back(sdp::add_block(p, 2 * d, true));  // P_M
      prog.x_blocks.push_back(sdp::add_block(p, 2 * d, true));   // Q_M
    }
    prog.p_block = prog.xt_blocks[0];
    // consistency across cuts (reference cut 0)
    const auto add_w_coeffs = [&](sdp::Constraint& c, std::size_t t, const ComplexMatrix& f,
                                  double sign) {
      const auto fpt = partial_transpose(HermitianMatrix::symmetrized(f), m.dims, m.cuts[t]);
      sdp::add_coeff_embedded(c, p, prog.xt_blocks[t], f, sign);
      sdp::add_coeff_embedded(c, p, prog.x_blocks[t], fpt.mat(), sign);
    };
    for (std::size_t t = 1; t < m.cuts.size(); ++t) {
      for (const auto& f : basis) {
        sdp::Constraint c;
        add_w_coeffs(c, 0, f, 1.0);
        add_w_coeffs(c, t, f, -1.0);
        c.b = 0.0;
        p.constraints.push_back(std::move(c));
      }
    }
    // Tr W = d through the reference cut
    {
      sdp::Constraint c;
      sdp::add_coeff_embedded(c, p, prog.xt_blocks[0], eye);
      sdp::add_coeff_embedded(c, p, prog.x_blocks[0], eye);
      c.b = static_cast<double>(d);
      p.constraints.push_back(std::move(c));
    }
    // objective: Tr(rho W) via the reference cut
    sdp::add_objective_embedded(p, prog.xt_blocks[0], rho.matrix().mat());
    sdp::add_objective_embedded(p, prog.x_blocks[0],
                                partial_transpose(rho, m.cuts[0]).mat());
  } else {
    // Summed decomposable: W = P + sum_M Q_M^{T_M}.
    prog.p_block = sdp::add_block(p, 2 * d, true);
    for (std::size_t t = 0; t < m.cuts.size(); ++t)
      prog.x_blocks.push_back(sdp::add_block(p, 2 * d, true));
    {
      sdp::Constraint c;
      sdp::add_coeff_embedded(c, p, prog.p_block, eye);
      for (int blk : prog.x_blocks) sdp::add_coeff_embedded(c, p, blk, eye);
      c.b = static_cast<double>(d);
      p.constraints.push_back(std::move(c));
    }
    sdp::add_objective_embedded(p, prog.p_block, rho.matrix().mat());
    for (std::size_t t = 0; t < m.cuts.size(); ++t)
      sdp::add_objective_embedded(p, prog.x_blocks[t],
                                  partial_transpose(rho, m.cuts[t]).mat());
  }
  return prog;
}

ConeProgram build_gr_dual(const DensityMatrix& rho, const SeparabilityModel& m) {
  check_dims(rho, m);
  const int d = m.dim();
  ConeProgram prog;
  prog.kind = ProgramKind::GrDual;
  prog.model = m;
  prog.rho = rho;
  prog.value_sign = -1.0;
  sdp::Problem& p = prog.problem;
  p.name = "gr-dual-" + m.tag();

  const auto basis = hermitian_basis(d);
  const ComplexMatrix eye = ComplexMatrix::identity(d);

  if (m.kind == ModelKind::MixturePPT) {
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      prog.xt_blocks.push_back(sdp::add_block(p, 2 * d, true));  // P_M
      prog.x_blocks.push_back(sdp::add_block(p, 2 * d, true));   // Q_M
    }
    prog.p_block = prog.xt_blocks[0];
    prog.r_block = sdp::add_block(p, 2 * d, true);
    const auto add_w_coeffs = [&](sdp::Constraint& c, std::size_t t, const ComplexMatrix& f,
                                  double sign) {
      const auto fpt = partial_transpose(HermitianMatrix::symmetrized(f), m.dims, m.cuts[t]);
      sdp::add_coeff_embedded(c, p, prog.xt_blocks[t], f, sign);
      sdp::add_coeff_embedded(c, p, prog.x_blocks[t], fpt.mat(), sign);
    };
    for (std::size_t t = 1; t < m.cuts.size(); ++t) {
      for (const auto& f : basis) {
        sdp::Constraint c;
        add_w_coeffs(c, 0, f, 1.0);
        add_w_coeffs(c, t, f, -1.0);
        c.b = 0.0;
        p.constraints.push_back(std::move(c));
      }
    }
    // W + R = I through the reference cut
    for (const auto& f : basis) {
      sdp::Constraint c;
      add_w_coeffs(c, 0, f, 1.0);
      sdp::add_coeff_embedded(c, p, prog.r_block, f);
      c.b = inner_with(f, eye);
      p.constraints.push_back(std::move(c));
    }
    sdp::add_objective_embedded(p, prog.xt_blocks[0], rho.matrix().mat());
    sdp::add_objective_embedded(p, prog.x_blocks[0],
                                partial_transpose(rho, m.cuts[0]).mat());
  } else {
    prog.p_block = sdp::add_block(p, 2 * d, true);
    for (std::size_t t = 0; t < m.cuts.size(); ++t)
      prog.x_blocks.push_back(sdp::add_block(p, 2 * d, true));
    prog.r_block = sdp::add_block(p, 2 * d, true);
    for (const auto& f : basis) {
      sdp::Constraint c;
      sdp::add_coeff_embedded(c, p, prog.p_block, f);
      for (std::size_t t = 0; t < m.cuts.size(); ++t) {
        const auto fpt = partial_transpose(HermitianMatrix::symmetrized(f), m.dims, m.cuts[t]);
        sdp::add_coeff_embedded(c, p, prog.x_blocks[t], fpt.mat());
      }
      sdp::add_coeff_embedded(c, p, prog.r_block, f);
      c.b = inner_with(f, eye);
      p.constraints.push_back(std::move(c));
    }
    sdp::add_objective_embedded(p, prog.p_block, rho.matrix().mat());
    for (std::size_t t = 0; t < m.cuts.size(); ++t)
      sdp::add_objective_embedded(p, prog.x_blocks[t],
                                  partial_transpose(rho, m.cuts[t]).mat());
  }
  return prog;
}

// ---------------------------------------------------------------------------

Witness extract_witness(const sdp::Solution& sol, const ConeProgram& prog) {
  if (prog.kind != ProgramKind::RrDual && prog.kind != ProgramKind::GrDual)
    throw InputError("extract_witness needs a witness-side program");
  if (sol.status != sdp::Status::Optimal)
    throw NumericalError("extract_witness: solver status " +
                         std::string(sdp::status_name(sol.status)));
  const auto& m = prog.model;
  const int d = m.dim();

  Witness w;
  w.normalization = prog.kind == ProgramKind::RrDual ? WitnessNormalization::TraceD
                                                     : WitnessNormalization::BoundedByIdentity;
  WitnessCertificate cert;
  double min_eig = 0.0;

  auto psd_part = [&](int blk) {
    const HermitianMatrix h =
        HermitianMatrix::symmetrized(sdp::extract_hermitian(sol.X[blk], d));
    min_eig = std::min(min_eig, min_eigenvalue(h));
    return h;
  };

  if (m.kind == ModelKind::MixturePPT) {
    cert.mode = CertificateMode::PerPartition;
    std::vector<HermitianMatrix> recon;
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      CertComponent comp;
      comp.cut = m.cuts[t];
      comp.p = psd_part(prog.xt_blocks[t]);
      comp.q = psd_part(prog.x_blocks[t]);
      recon.push_back(
          herm_add(comp.p, partial_transpose(comp.q, m.dims, m.cuts[t])));
      cert.parts.push_back(std::move(comp));
    }
    w.matrix = recon[0];
    double resid = 0.0;
    for (std::size_t t = 1; t < recon.size(); ++t)
      resid = std::max(resid, fro_norm(recon[t].mat() - w.matrix.mat()));
    cert.reconstruction_residual = resid;
  } else {
    cert.mode = CertificateMode::Summed;
    cert.p = psd_part(prog.p_block);
    HermitianMatrix acc = cert.p;
    for (std::size_t t = 0; t < m.cuts.size(); ++t) {
      CertComponent comp;
      comp.cut = m.cuts[t];
      comp.q = psd_part(prog.x_blocks[t]);
      acc = herm_add(acc, partial_transpose(comp.q, m.dims, m.cuts[t]));
      cert.parts.push_back(std::move(comp));
    }
    w.matrix = acc;
    cert.reconstruction_residual = 0.0;  // reconstruction defines W here
    if (prog.r_block >= 0) {
      // cross-check against the I - R route
      const HermitianMatrix r = psd_part(prog.r_block);
      const HermitianMatrix alt = herm_sub(
          HermitianMatrix(ComplexMatrix::identity(d)), r);
      cert.reconstruction_residual = fro_norm(alt.mat() - w.matrix.mat());
    }
  }
  cert.min_component_eig = min_eig;

  if (cert.reconstruction_residual > 1e-7)
    throw NumericalError("witness certificate reconstruction residual " +
                         std::to_string(cert.reconstruction_residual));
  if (min_eig < -1e-9)
    throw NumericalError("witness certificate component not PSD: min eig " +
                         std::to_string(min_eig));

  // Normalization invariants.
  if (w.normalization == WitnessNormalization::TraceD) {
    // Rescale away the solver's feasibility slack on the trace constraint;
    // positive scaling preserves dual-cone membership.
    const double tr0 = trace(w.matrix.mat()).real();
    if (tr0 <= 0.0) throw NumericalError("witness trace not positive");
    const double f = static_cast<double>(d) / tr0;
    w.matrix = herm_scale(f, w.matrix);
    cert.p = herm_scale(f, cert.p);
    for (auto& comp : cert.parts) {
      comp.p = herm_scale(f, comp.p);
      comp.q = herm_scale(f, comp.q);
    }
    const double tr = trace(w.matrix.mat()).real();
    if (std::abs(tr - d) > 1e-8)
      throw NumericalError("witness trace " + std::to_string(tr) + " != d");
  } else {
    // Scale away the solver's slack on W + R = I; shrinking a dual-cone
    // member keeps it in the cone.
    double top = max_eigenvalue(w.matrix);
    if (top > 1.0) {
      if (top > 1.0 + 1e-6)
        throw NumericalError("witness exceeds identity: max eig " + std::to_string(top));
      const double f = 1.0 / top;
      w.matrix = herm_scale(f, w.matrix);
      cert.p = herm_scale(f, cert.p);
      for (auto& comp : cert.parts) {
        comp.p = herm_scale(f, comp.p);
        comp.q = herm_scale(f, comp.q);
      }
      top = max_eigenvalue(w.matrix);
    }
    if (top > 1.0 + 1e-9)
      throw NumericalError("witness exceeds identity: max eig " + std::to_string(top));
  }

  // Value identity: -Tr(W rho) equals the program value.
  const double val = prog.program_value(sol);
  const double wval = -hs_inner(w.matrix, prog.rho.matrix());
  if (std::abs(wval - val) > 1e-6 * (1.0 + std::abs(val)))
    throw NumericalError("witness value mismatch: -Tr(W rho) = " + std::to_string(wval) +
                         " vs program value " + std::to_string(val));

  w.certificate = std::move(cert);
  return w;
}

MembershipResult membership_check(const DensityMatrix& sigma, const SeparabilityModel& m,
                                  double tol) {
  check_dims(sigma, m);
  MembershipResult res;
  if (m.kind != ModelKind::MixturePPT) {
    double worst = std::numeric_limits<double>::infinity();
    std::string worst_cut;
    for (const auto& cut : m.cuts) {
      const double lam = min_eigenvalue(partial_transpose(sigma, cut));
      if (lam < worst) {
        worst = lam;
        worst_cut = cut.label();
      }
    }
    res.violation = worst;
    res.inside = worst >= -tol;
    res.detail = "min PT eigenvalue at cut " + worst_cut;
    return res;
  }

  // Feasibility SDP: minimize s >= -1 with sigma + s I/d in the mixture cone;
  // the shifted variable s' = s + 1 keeps the standard form.
  const int d = m.dim();
  ConeProgram prog;
  prog.model = m;
  prog.kind = ProgramKind::Membership;
  sdp::Problem& p = prog.problem;
  p.name = "membership-" + m.tag();
  const auto basis = hermitian_basis(d);
  const ComplexMatrix eye = ComplexMatrix::identity(d);

  prog.s_block = sdp::add_block(p, 1, false);
  sdp::add_objective_scalar(p, prog.s_block, 1.0);
  for (std::size_t t = 0; t < m.cuts.size(); ++t) {
    prog.x_blocks.push_back(sdp::add_block(p, 2 * d, true));
    prog.xt_blocks.push_back(sdp::add_block(p, 2 * d, true));
  }
  for (std::size_t t = 0; t < m.cuts.size(); ++t) {
    for (const auto& f : basis) {
      const auto fpt = partial_transpose(HermitianMatrix::symmetrized(f), m.dims, m.cuts[t]);
      sdp::Constraint c;
      sdp::add_coeff_embedded(c, p, prog.xt_blocks[t], f);
      sdp::add_coeff_embedded(c, p, prog.x_blocks[t], fpt.mat(), -1.0);
      c.b = 0.0;
      p.constraints.push_back(std::move(c));
    }
  }
  for (const auto& f : basis) {
    sdp::Constraint c;
    for (int blk : prog.x_blocks) sdp::add_coeff_embedded(c, p, blk, f);
    sdp::add_coeff_scalar(c, prog.s_block, -inner_with(f, eye) / d);
    c.b = inner_with(f, sigma.matrix().mat()) - inner_with(f, eye) / d;
    p.constraints.push_back(std::move(c));
  }

  // Boundary states sit exactly on the cone surface, where the optimal
  // face degenerates and the default feasibility target can stall. The
  // membership question is posed at tol ~1e-6, so a looser solve still
  // decides it with margin.
  auto sol = sdp::solve(p);
  if (sol.status != sdp::Status::Optimal) {
    sdp::SolveOptions loose;
    loose.tol_feas = 1e-7;
    loose.tol_gap = 1e-6;
    sol = sdp::solve(p, loose);
  }
  if (sol.status != sdp::Status::Optimal)
    throw NumericalError("membership SDP: solver status " +
                         std::string(sdp::status_name(sol.status)));
  const double s = sol.primal_obj - 1.0;
  res.violation = -s / d;
  res.inside = res.violation >= -tol;
  res.detail = "mixture feasibility margin";
  return res;
}

Ket random_model_member(const SeparabilityModel& m, Rng& rng) {
  const int n = m.parties();
  if (m.kind == ModelKind::MixturePPT && n > 2) {
    const auto& cut = m.cuts[rng.below(m.cuts.size())];
    std::vector<int> a = cut.member_list(), b;
    for (int i = 0; i < n; ++i)
      if (!cut.contains(i)) b.push_back(i);
    return random_product_ket(m.dims, {a, b}, rng);
  }
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups.push_back({i});
  return random_product_ket(m.dims, groups, rng);
}

}  // namespace qrob
