#include "qrob/tomo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qrob/eig.hpp"
#include "qrob/kernels.hpp"

namespace qrob {

namespace {

void require_qubits(const DensityMatrix& rho) {
  for (int d : rho.dims())
    if (d != 2) throw InputError("tomography supports qubit subsystems only");
}

// Eigenvector of the single-qubit Pauli for outcome bit 0 (+1) / 1 (-1).
void axis_eigvec(PauliAxis a, int bit, cplx out[2]) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (a) {
    case PauliAxis::X:
      out[0] = {r, 0.0};
      out[1] = {bit ? -r : r, 0.0};
      break;
    case PauliAxis::Y:
      out[0] = {r, 0.0};
      out[1] = bit ? cplx{0.0, -r} : cplx{0.0, r};
      break;
    case PauliAxis::Z:
      out[0] = {bit ? 0.0 : 1.0, 0.0};
      out[1] = {bit ? 1.0 : 0.0, 0.0};
      break;
  }
}

ComplexMatrix pauli_single(int p) {
  ComplexMatrix m(2);
  switch (p) {
    case 0:
      m.set(0, 0, 1.0);
      m.set(1, 1, 1.0);
      break;
    case 1:
      m.set(0, 1, 1.0);
      m.set(1, 0, 1.0);
      break;
    case 2:
      m.set(0, 1, {0.0, -1.0});
      m.set(1, 0, {0.0, 1.0});
      break;
    case 3:
      m.set(0, 0, 1.0);
      m.set(1, 1, -1.0);
      break;
    default:
      throw InputError("bad Pauli index");
  }
  return m;
}

int pow_int(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

std::string MeasurementSetting::label() const {
  std::string s;
  for (PauliAxis a : axes) s += "XYZ"[static_cast<int>(a)];
  return s;
}

std::vector<MeasurementSetting> all_settings(int qubits) {
  const int total = pow_int(3, qubits);
  std::vector<MeasurementSetting> out;
  out.reserve(total);
  for (int idx = 0; idx < total; ++idx) {
    MeasurementSetting s;
    s.axes.resize(qubits);
    int rem = idx;
    for (int q = qubits - 1; q >= 0; --q) {
      s.axes[q] = static_cast<PauliAxis>(rem % 3);
      rem /= 3;
    }
    out.push_back(std::move(s));
  }
  return out;
}

CountsRecord simulate_counts(const DensityMatrix& rho, const MeasurementSetting& setting,
                             std::int64_t shots, std::uint64_t seed) {
  require_qubits(rho);
  if (setting.qubits() != rho.parties())
    throw InputError("measurement setting does not match the qubit count");
  if (shots < 0) throw InputError("shot count must be nonnegative");
  const int n = rho.parties();
  const int d = rho.dim();

  // Born-rule probabilities in the product eigenbasis.
  std::vector<double> probs(d, 0.0);
  std::vector<double> vr(d), vi(d), yr(d), yi(d);
  double total = 0.0;
  for (int o = 0; o < d; ++o) {
    // product vector for outcome bits of o
    std::fill(vr.begin(), vr.end(), 0.0);
    std::fill(vi.begin(), vi.end(), 0.0);
    vr[0] = 1.0;
    int cur = 1;
    for (int q = 0; q < n; ++q) {
      cplx f[2];
      axis_eigvec(setting.axes[q], (o >> (n - 1 - q)) & 1, f);
      for (int i = cur - 1; i >= 0; --i) {
        const cplx amp{vr[i], vi[i]};
        const cplx a0 = amp * f[0];
        const cplx a1 = amp * f[1];
        vr[2 * i] = a0.real();
        vi[2 * i] = a0.imag();
        vr[2 * i + 1] = a1.real();
        vi[2 * i + 1] = a1.imag();
      }
      cur *= 2;
    }
    std::fill(yr.begin(), yr.end(), 0.0);
    std::fill(yi.begin(), yi.end(), 0.0);
    kern::active().zgemv_acc(rho.matrix().mat().re.data(), rho.matrix().mat().im.data(),
                             vr.data(), vi.data(), yr.data(), yi.data(), d, d);
    double p = 0.0;
    for (int i = 0; i < d; ++i) p += vr[i] * yr[i] + vi[i] * yi[i];
    probs[o] = std::max(0.0, p);
    total += probs[o];
  }
  for (double& p : probs) p /= total;

  CountsRecord rec;
  rec.setting = setting;
  rec.shots = shots;
  if (shots == 0) {
    rec.counts = probs;
    return rec;
  }
  rec.counts.assign(d, 0.0);
  std::vector<double> cum(d);
  double acc = 0.0;
  for (int o = 0; o < d; ++o) {
    acc += probs[o];
    cum[o] = acc;
  }
  cum[d - 1] = 1.0;
  Rng rng(seed);
  for (std::int64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform();
    int o = 0;
    while (cum[o] < u) ++o;
    rec.counts[o] += 1.0;
  }
  return rec;
}

PauliTable estimate_pauli_expectations(const std::vector<CountsRecord>& records) {
  if (records.empty()) throw InputError("no measurement records");
  const int n = records[0].setting.qubits();
  const int strings = pow_int(4, n);
  PauliTable table;
  table.qubits = n;
  table.value.assign(strings, 0.0);
  table.std_err.assign(strings, 0.0);

  for (int p = 0; p < strings; ++p) {
    // base-4 digits, party 0 most significant
    std::vector<int> dig(n);
    int rem = p;
    for (int q = n - 1; q >= 0; --q) {
      dig[q] = rem % 4;
      rem /= 4;
    }
    if (p == 0) {
      table.value[0] = 1.0;
      continue;
    }
    // first compatible record: axes match on every non-identity slot
    const CountsRecord* rec = nullptr;
    for (const auto& r : records) {
      if (r.setting.qubits() != n) throw InputError("inconsistent qubit counts in records");
      bool ok = true;
      for (int q = 0; q < n && ok; ++q)
        if (dig[q] != 0 && static_cast<int>(r.setting.axes[q]) != dig[q] - 1) ok = false;
      if (ok) {
        rec = &r;
        break;
      }
    }
    if (rec == nullptr)
      throw InputError("no compatible measurement record for a requested Pauli string");

    const int d = static_cast<int>(rec->counts.size());
    double num = 0.0, den = 0.0;
    for (int o = 0; o < d; ++o) {
      int parity = 0;
      for (int q = 0; q < n; ++q)
        if (dig[q] != 0) parity ^= (o >> (n - 1 - q)) & 1;
      num += (parity ? -1.0 : 1.0) * rec->counts[o];
      den += rec->counts[o];
    }
    const double e = num / den;
    table.value[p] = e;
    table.std_err[p] =
        rec->shots > 0 ? std::sqrt(std::max(0.0, 1.0 - e * e) / rec->shots) : 0.0;
  }
  return table;
}

ComplexMatrix pauli_string_matrix(int qubits, int index) {
  ComplexMatrix m = ComplexMatrix::identity(1);
  std::vector<int> dig(qubits);
  int rem = index;
  for (int q = qubits - 1; q >= 0; --q) {
    dig[q] = rem % 4;
    rem /= 4;
  }
  for (int q = 0; q < qubits; ++q) m = tensor_product(m, pauli_single(dig[q]));
  return m;
}

ReconstructionResult reconstruct(const PauliTable& table) {
  const int n = table.qubits;
  const int strings = pow_int(4, n);
  if (static_cast<int>(table.size()) != strings)
    throw InputError("incomplete Pauli expectation table");
  const int d = pow_int(2, n);
  ComplexMatrix raw(d);
  for (int p = 0; p < strings; ++p) {
    if (table.value[p] == 0.0) continue;
    raw += (table.value[p] / d) * pauli_string_matrix(n, p);
  }
  ReconstructionResult out;
  out.raw = HermitianMatrix::symmetrized(raw);
  out.estimate = DensityMatrix::unchecked(psd_project(out.raw, true),
                                          std::vector<int>(n, 2));
  out.method = "linear-inversion+clip-renormalize";
  return out;
}

WitnessEstimate witness_expectation(const PauliTable& table, const Witness& w) {
  const int n = table.qubits;
  const int d = pow_int(2, n);
  if (w.matrix.dim() != d) throw InputError("witness dimension does not match the table");
  WitnessEstimate est;
  double var = 0.0;
  for (int p = 0; p < static_cast<int>(table.size()); ++p) {
    const ComplexMatrix pm = pauli_string_matrix(n, p);
    const double coeff =
        hs_inner(w.matrix, HermitianMatrix::symmetrized(pm)) / d;  // Tr(W P)/2^n
    if (coeff == 0.0) continue;
    est.value += coeff * table.value[p];
    if (p != 0) var += coeff * coeff * table.std_err[p] * table.std_err[p];
  }
  est.std_err = std::sqrt(var);
  est.detected = est.value + est.std_err < 0.0;
  return est;
}

std::vector<ExperimentRow> end_to_end_experiment(const StateFamily& f, Quantifier quant,
                                                 const SeparabilityModel& m, int grid_points,
                                                 std::int64_t shots, std::uint64_t seed,
                                                 const ExperimentOptions& opt) {
  if (grid_points < 2) throw InputError("experiment needs at least two grid points");
  if (shots < 0) throw InputError("shot count must be nonnegative");

  std::vector<ExperimentRow> rows(grid_points);
  const auto settings = all_settings(static_cast<int>(f.dims.size()));

  int threads = opt.threads > 0 ? opt.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, grid_points));
  std::atomic<int> next{0};
  std::atomic<int> failures{0};

  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= grid_points) return;
      ExperimentRow& row = rows[i];
      row.q = static_cast<double>(i) / (grid_points - 1);
      row.shots = shots;
      row.seed = Rng::derive(seed, static_cast<std::uint64_t>(i));
      try {
        const DensityMatrix rho = f.at(row.q);
        std::vector<CountsRecord> records;
        records.reserve(settings.size());
        for (std::size_t s = 0; s < settings.size(); ++s)
          records.push_back(
              simulate_counts(rho, settings[s], shots, Rng::derive(row.seed, s)));
        const PauliTable table = estimate_pauli_expectations(records);
        const ReconstructionResult rec = reconstruct(table);
        const RobustnessResult fit =
            quant == Quantifier::Random
                ? random_robustness(rec.estimate, m, opt.robustness)
                : generalized_robustness(rec.estimate, m, opt.robustness);
        const WitnessEstimate we = witness_expectation(table, fit.witness);
        row.estimate = std::max(0.0, -we.value);
        row.std_err = we.std_err;
        // Ground truth through the same witness functional (the dual side
        // of the truth solve); identical to the scan value within the
        // primal/dual cross tolerance.
        const RobustnessResult truth =
            quant == Quantifier::Random ? random_robustness(rho, m, opt.robustness)
                                        : generalized_robustness(rho, m, opt.robustness);
        row.truth = std::max(0.0, -hs_inner(truth.witness.matrix, rho.matrix()));
      } catch (const std::exception& e) {
        failures.fetch_add(1);
        row.estimate = std::nan("");
        row.std_err = std::nan("");
        row.truth = std::nan("");
      }
    }
  };
  {
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }
  if (failures.load() * 10 > grid_points)
    throw NumericalError("experiment failed at " + std::to_string(failures.load()) +
                         " grid points");
  return rows;
}

}  // namespace qrob
