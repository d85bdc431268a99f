#include "qrob/json_io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qrob/eig.hpp"

namespace qrob::io {

namespace {

std::vector<double> doubles_from(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(std::string(what) + " must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<int> ints_from(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InputError(std::string(what) + " must contain integers");
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json matrix_to_json(const ComplexMatrix& m) {
  return json{{"dim", m.dim}, {"re", m.re}, {"im", m.im}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.contains("dim") || !j.contains("re") || !j.contains("im"))
    throw InputError("matrix JSON needs dim, re, im");
  const int d = j.at("dim").get<int>();
  if (d <= 0 || d > 64) throw InputError("matrix dim out of supported range [1, 64]");
  ComplexMatrix m(d);
  m.re = doubles_from(j.at("re"), "re");
  m.im = doubles_from(j.at("im"), "im");
  if (m.re.size() != static_cast<std::size_t>(d) * d ||
      m.im.size() != static_cast<std::size_t>(d) * d)
    throw InputError("matrix entry count does not equal dim^2");
  return m;
}

json state_to_json(const DensityMatrix& rho) {
  json j = matrix_to_json(rho.matrix().mat());
  j["dims"] = rho.dims();
  return j;
}

DensityMatrix state_from_json(const json& j) {
  ComplexMatrix m = matrix_from_json(j);
  std::vector<int> dims;
  if (j.contains("dims"))
    dims = ints_from(j.at("dims"), "dims");
  else
    dims = {m.dim};
  return DensityMatrix::from_matrix(HermitianMatrix(m, 1e-9), dims);
}

json ket_to_json(const Ket& k) {
  return json{{"dims", k.dims}, {"re", k.re}, {"im", k.im}};
}

Ket ket_from_json(const json& j) {
  Ket k;
  k.dims = ints_from(j.at("dims"), "dims");
  k.re = doubles_from(j.at("re"), "re");
  k.im = doubles_from(j.at("im"), "im");
  int d = 1;
  for (int x : k.dims) d *= x;
  if (static_cast<int>(k.re.size()) != d || static_cast<int>(k.im.size()) != d)
    throw InputError("ket amplitude count does not match dims");
  if (std::abs(k.norm() - 1.0) > 1e-10) throw InputError("ket is not normalized");
  return k;
}

DensityMatrix state_or_ket_from_json(const json& j, bool* is_pure, Ket* ket_out) {
  const bool is_ket = !j.contains("dim");
  if (is_pure != nullptr) *is_pure = is_ket;
  if (is_ket) {
    Ket k = ket_from_json(j);
    if (ket_out != nullptr) *ket_out = k;
    return projector(k);
  }
  return state_from_json(j);
}

json witness_to_json(const Witness& w) {
  json j;
  j["matrix"] = matrix_to_json(w.matrix.mat());
  j["normalization"] = normalization_name(w.normalization);
  if (w.certificate.has_value()) {
    const auto& c = *w.certificate;
    json cj;
    cj["mode"] = c.mode == CertificateMode::Summed ? "summed" : "per-partition";
    cj["reconstruction_residual"] = c.reconstruction_residual;
    cj["min_component_eig"] = c.min_component_eig;
    if (c.mode == CertificateMode::Summed) cj["p"] = matrix_to_json(c.p.mat());
    cj["parts"] = json::array();
    for (const auto& part : c.parts) {
      json pj;
      pj["cut"] = part.cut.label();
      pj["cut_members"] = part.cut.member_list();
      if (c.mode == CertificateMode::PerPartition) pj["p"] = matrix_to_json(part.p.mat());
      pj["q"] = matrix_to_json(part.q.mat());
      cj["parts"].push_back(pj);
    }
    j["certificate"] = cj;
  }
  if (w.audit.has_value()) {
    j["audit"] = json{{"samples", w.audit->samples},
                      {"min_expectation", w.audit->min_expectation},
                      {"seed", w.audit->seed}};
  }
  return j;
}

Witness witness_from_json(const json& j) {
  Witness w;
  w.matrix = HermitianMatrix(matrix_from_json(j.at("matrix")), 1e-9);
  const std::string norm = j.at("normalization").get<std::string>();
  if (norm == "trace-d")
    w.normalization = WitnessNormalization::TraceD;
  else if (norm == "bounded-by-identity")
    w.normalization = WitnessNormalization::BoundedByIdentity;
  else
    throw InputError("unknown witness normalization tag: " + norm);
  if (j.contains("certificate")) {
    const auto& cj = j.at("certificate");
    WitnessCertificate c;
    c.mode = cj.at("mode").get<std::string>() == "summed" ? CertificateMode::Summed
                                                          : CertificateMode::PerPartition;
    c.reconstruction_residual = cj.value("reconstruction_residual", 0.0);
    c.min_component_eig = cj.value("min_component_eig", 0.0);
    if (cj.contains("p")) c.p = HermitianMatrix(matrix_from_json(cj.at("p")), 1e-9);
    for (const auto& pj : cj.at("parts")) {
      CertComponent comp;
      const auto members = ints_from(pj.at("cut_members"), "cut_members");
      comp.cut.parties = 0;
      for (int m : members) comp.cut.members |= 1u << m;
      comp.q = HermitianMatrix(matrix_from_json(pj.at("q")), 1e-9);
      if (pj.contains("p")) comp.p = HermitianMatrix(matrix_from_json(pj.at("p")), 1e-9);
      c.parts.push_back(std::move(comp));
    }
    w.certificate = std::move(c);
  }
  if (j.contains("audit")) {
    AuditRecord a;
    a.samples = j.at("audit").at("samples").get<int>();
    a.min_expectation = j.at("audit").at("min_expectation").get<double>();
    a.seed = j.at("audit").at("seed").get<std::uint64_t>();
    w.audit = a;
  }
  return w;
}

json robustness_result_to_json(const RobustnessResult& r) {
  json j;
  j["quantifier"] = quantifier_name(r.quantifier);
  j["model"] = r.model_tag;
  j["value"] = r.value;
  j["primal_value"] = r.primal_value;
  j["dual_value"] = r.dual_value;
  j["gap"] = r.gap;
  j["clamped"] = r.clamped;
  j["status"] = sdp::status_name(r.status);
  j["witness"] = witness_to_json(r.witness);
  j["boundary_state"] = state_to_json(r.boundary_state);
  if (r.optimal_noise.has_value()) j["optimal_noise"] = state_to_json(*r.optimal_noise);
  if (!r.mixture_components.empty()) {
    j["mixture_components"] = json::array();
    for (const auto& [cut, x] : r.mixture_components)
      j["mixture_components"].push_back(
          json{{"cut", cut.label()}, {"matrix", matrix_to_json(x.mat())}});
  }
  j["iterations"] = {{"primal", r.primal_iterations}, {"dual", r.dual_iterations}};
  return j;
}

json kink_report_to_json(const KinkReport& k) {
  return json{{"location", k.location},
              {"left_slope", k.left_slope},
              {"right_slope", k.right_slope},
              {"score", k.score},
              {"bracket", {k.bracket_lo, k.bracket_hi}},
              {"refined", k.refined},
              {"witness_corroborated", k.witness_corroborated}};
}

json phase_to_json(const PhaseInterval& p) {
  return json{{"lo", p.lo}, {"hi", p.hi}, {"label", p.label}};
}

json problem_to_json(const sdp::Problem& p) {
  json j;
  j["name"] = p.name;
  j["blocks"] = json::array();
  for (const auto& b : p.blocks)
    j["blocks"].push_back(json{{"size", b.size}, {"embedded", b.embedded}});
  j["C"] = json::array();
  for (const auto& c : p.C) j["C"].push_back(c);
  j["constraints"] = json::array();
  for (const auto& c : p.constraints) {
    json cj;
    cj["b"] = c.b;
    cj["entries"] = json::array();
    for (const auto& e : c.a)
      cj["entries"].push_back(json{{"blk", e.blk}, {"r", e.r}, {"c", e.c}, {"v", e.v}});
    j["constraints"].push_back(cj);
  }
  return j;
}

sdp::Problem problem_from_json(const json& j) {
  sdp::Problem p;
  p.name = j.value("name", "");
  for (const auto& bj : j.at("blocks"))
    sdp::add_block(p, bj.at("size").get<int>(), bj.value("embedded", false));
  const auto& cs = j.at("C");
  for (std::size_t b = 0; b < p.C.size(); ++b) {
    p.C[b] = doubles_from(cs.at(b), "C block");
    if (p.C[b].size() != static_cast<std::size_t>(p.blocks[b].size) * p.blocks[b].size)
      throw InputError("objective block size mismatch");
  }
  for (const auto& cj : j.at("constraints")) {
    sdp::Constraint c;
    c.b = cj.at("b").get<double>();
    for (const auto& ej : cj.at("entries"))
      c.a.push_back({ej.at("blk").get<int>(), ej.at("r").get<int>(), ej.at("c").get<int>(),
                     ej.at("v").get<double>()});
    p.constraints.push_back(std::move(c));
  }
  p.deduplicate_constraints();
  return p;
}

json cert_report_to_json(const sdp::CertReport& r) {
  json j;
  j["all_pass"] = r.all_pass();
  j["checks"] = json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back(
        json{{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"bound", c.bound}});
  return j;
}

json counts_to_json(const CountsRecord& r) {
  return json{{"setting", r.setting.label()}, {"shots", r.shots}, {"counts", r.counts}};
}

CountsRecord counts_from_json(const json& j) {
  CountsRecord r;
  const std::string label = j.at("setting").get<std::string>();
  for (char c : label) {
    switch (c) {
      case 'X': r.setting.axes.push_back(PauliAxis::X); break;
      case 'Y': r.setting.axes.push_back(PauliAxis::Y); break;
      case 'Z': r.setting.axes.push_back(PauliAxis::Z); break;
      default: throw InputError("bad setting label");
    }
  }
  r.shots = j.at("shots").get<std::int64_t>();
  r.counts = doubles_from(j.at("counts"), "counts");
  if (r.counts.size() != (std::size_t{1} << r.setting.qubits()))
    throw InputError("counts length must be 2^qubits");
  if (r.shots > 0) {
    double sum = 0.0;
    for (double c : r.counts) {
      if (c < 0.0) throw InputError("negative count");
      sum += c;
    }
    if (std::abs(sum - static_cast<double>(r.shots)) > 1e-9)
      throw InputError("counts do not sum to the shot count");
  }
  return r;
}

std::string scan_csv(const ScanResult& scan) {
  std::string out = "q,quantifier,model,value,dual_value,gap,status,witness_jump\n";
  for (std::size_t i = 0; i < scan.curve.size(); ++i) {
    const auto& p = scan.curve[i];
    out += fmt_double(scan.grid[i]);
    out += ',';
    out += quantifier_name(scan.quantifier);
    out += ',';
    out += scan.model_tag;
    out += ',';
    if (p.ok) {
      out += fmt_double(p.result.value);
      out += ',';
      out += fmt_double(p.result.dual_value);
      out += ',';
      out += fmt_double(p.result.gap);
      out += ',';
      out += sdp::status_name(p.result.status);
    } else {
      out += ",,,Failed";
    }
    out += ',';
    out += fmt_double(scan.witness_step.empty() ? 0.0 : scan.witness_step[i]);
    out += '\n';
  }
  return out;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = "q,estimate,stderr,truth,N,seed\n";
  for (const auto& r : rows) {
    out += fmt_double(r.q);
    out += ',';
    out += fmt_double(r.estimate);
    out += ',';
    out += fmt_double(r.std_err);
    out += ',';
    out += fmt_double(r.truth);
    out += ',';
    out += std::to_string(r.shots);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

StateFamily family_from_json(const json& j) {
  StateFamily f;
  f.name = j.value("name", "custom");
  if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").empty())
    throw InputError("family file needs a nonempty entries array");
  auto states = std::make_shared<std::vector<std::pair<double, DensityMatrix>>>();
  for (const auto& e : j.at("entries")) {
    const double q = e.at("q").get<double>();
    if (q < 0.0 || q > 1.0) throw InputError("family entry q outside [0,1]");
    states->push_back({q, state_from_json(e.at("state"))});
  }
  std::sort(states->begin(), states->end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  f.dims = states->front().second.dims();
  for (const auto& [q, st] : *states)
    if (st.dims() != f.dims) throw InputError("family entries have inconsistent dims");
  f.at = [states](double q) {
    // nearest-entry lookup with linear interpolation between neighbors
    if (q <= states->front().first) return states->front().second;
    if (q >= states->back().first) return states->back().second;
    std::size_t hi = 1;
    while ((*states)[hi].first < q) ++hi;
    const auto& [qa, sa] = (*states)[hi - 1];
    const auto& [qb, sb] = (*states)[hi];
    const double t = (q - qa) / (qb - qa);
    ComplexMatrix m = (1.0 - t) * ComplexMatrix(sa.matrix().mat()) + t * sb.matrix().mat();
    return DensityMatrix::unchecked(HermitianMatrix::symmetrized(m), sa.dims());
  };
  return f;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write to " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace qrob::io
