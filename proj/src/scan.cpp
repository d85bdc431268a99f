#include "qrob/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace qrob {

namespace {

RobustnessResult solve_point(const DensityMatrix& rho, Quantifier quant,
                             const SeparabilityModel& m, const RobustnessOptions& opt) {
  return quant == Quantifier::Random ? random_robustness(rho, m, opt)
                                     : generalized_robustness(rho, m, opt);
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// OLS slope over (x, y) pairs.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

void check_uniform(const std::vector<double>& grid) {
  if (grid.size() < 5) throw InputError("kink detection needs at least 5 samples");
  const double h = grid[1] - grid[0];
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (std::abs((grid[i + 1] - grid[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw InputError("kink detection needs a uniform grid");
}

}  // namespace

std::vector<double> ScanResult::values() const {
  std::vector<double> v;
  v.reserve(curve.size());
  for (const auto& p : curve) v.push_back(p.ok ? p.result.value : 0.0);
  return v;
}

ScanResult scan_family(const StateFamily& f, Quantifier quant, const SeparabilityModel& m,
                       int grid_points, const ScanOptions& opt) {
  if (grid_points < 5) throw InputError("scan needs at least 5 grid points");
  ScanResult out;
  out.family = f.name;
  out.quantifier = quant;
  out.model_tag = m.tag();
  out.grid.resize(grid_points);
  out.curve.resize(grid_points);
  for (int i = 0; i < grid_points; ++i)
    out.grid[i] = static_cast<double>(i) / (grid_points - 1);

  int threads = opt.threads > 0 ? opt.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, grid_points));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= grid_points) return;
      ScanPoint& pt = out.curve[i];
      pt.q = out.grid[i];
      try {
        const DensityMatrix rho = f.at(pt.q);
        pt.result = solve_point(rho, quant, m, opt.robustness);
        pt.ok = true;
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
      }
    }
  };
  {
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }

  int failed = 0;
  for (const auto& pt : out.curve)
    if (!pt.ok) ++failed;
  if (failed * 10 > grid_points)
    throw NumericalError("scan failed at " + std::to_string(failed) + " of " +
                         std::to_string(grid_points) + " grid points");

  // Values with isolated gaps bridged by linear interpolation, for the
  // detectors only; the per-point records keep the failure.
  std::vector<double> vals(grid_points, 0.0);
  for (int i = 0; i < grid_points; ++i) {
    if (out.curve[i].ok) {
      vals[i] = out.curve[i].result.value;
    } else {
      int l = i - 1, r = i + 1;
      while (l >= 0 && !out.curve[l].ok) --l;
      while (r < grid_points && !out.curve[r].ok) ++r;
      if (l >= 0 && r < grid_points) {
        const double t = (out.grid[i] - out.grid[l]) / (out.grid[r] - out.grid[l]);
        vals[i] = (1.0 - t) * out.curve[l].result.value + t * out.curve[r].result.value;
      } else if (l >= 0) {
        vals[i] = out.curve[l].result.value;
      } else if (r < grid_points) {
        vals[i] = out.curve[r].result.value;
      }
    }
  }

  out.witness_step.assign(grid_points, 0.0);
  for (int i = 1; i < grid_points; ++i) {
    if (!out.curve[i].ok || !out.curve[i - 1].ok) continue;
    out.witness_step[i] = fro_norm(out.curve[i].result.witness.matrix.mat() -
                                   out.curve[i - 1].result.witness.matrix.mat());
  }

  out.kinks = detect_kinks(out.grid, vals, opt.kink_threshold, opt.separable_tol * 0.1);
  out.witness_jumps = witness_jumps(out, opt.witness_threshold);

  if (opt.refine) {
    std::vector<KinkReport> refined;
    for (const auto& k : out.kinks) {
      try {
        auto r = refine_kink(f, quant, m, k.bracket_lo, k.bracket_hi, 1e-3, opt.robustness);
        if (r.has_value()) {
          r->score = k.score;
          refined.push_back(*r);
        } else {
          // The second-difference outlier stands at grid scale, but the
          // slope jump vanished under refinement (a curvature break, not a
          // slope discontinuity). Keep the operational report, unrefined.
          refined.push_back(k);
        }
      } catch (const std::exception&) {
        refined.push_back(k);  // keep the grid-level report when refining fails
      }
    }
    out.kinks = refined;
  }
  for (auto& k : out.kinks) {
    k.witness_corroborated = false;
    for (const auto& j : out.witness_jumps)
      if (k.location >= j.first.first - 1e-12 && k.location <= j.first.second + 1e-12)
        k.witness_corroborated = true;
  }

  out.phases = phase_labels(out.grid, vals, out.kinks, opt.separable_tol);

  const double h = out.grid[1] - out.grid[0];
  for (int i = 1; i < grid_points; ++i)
    out.lipschitz_estimate = std::max(out.lipschitz_estimate, std::abs(vals[i] - vals[i - 1]) / h);
  return out;
}

std::vector<KinkReport> detect_kinks(const std::vector<double>& grid,
                                     const std::vector<double>& values, double threshold,
                                     double value_floor) {
  check_uniform(grid);
  if (grid.size() != values.size()) throw InputError("detect_kinks: size mismatch");
  const int n = static_cast<int>(grid.size());
  const double h = grid[1] - grid[0];

  std::vector<double> score(n, 0.0);
  std::vector<bool> excluded(n, false);
  std::vector<double> pool;
  for (int i = 1; i + 1 < n; ++i) {
    if (std::min({values[i - 1], values[i], values[i + 1]}) < value_floor) {
      excluded[i] = true;
      continue;
    }
    score[i] = std::abs(values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h);
    pool.push_back(score[i]);
  }
  if (pool.empty()) return {};
  const double max_score = *std::max_element(pool.begin(), pool.end());
  if (max_score <= 0.0) return {};
  // Floor the median so exactly-linear segments (solver-noise scores) do
  // not drag the reference level to zero, and require an absolute slope
  // jump of at least 1e-5 of the curve scale so roundoff on affine curves
  // never flags.
  const double med = std::max(median_of(pool), 1e-3 * max_score);
  double vscale = 0.0;
  for (double v : values) vscale = std::max(vscale, std::abs(v));
  const double flag_level = std::max(threshold * med, 1e-5 * std::max(vscale, 1e-30) / h);

  std::vector<KinkReport> out;
  int i = 1;
  while (i + 1 < n) {
    if (excluded[i] || score[i] <= flag_level) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n - 1 && !excluded[j + 1] && score[j + 1] > flag_level) ++j;
    int peak = i;
    for (int k = i; k <= j; ++k)
      if (score[k] > score[peak]) peak = k;

    KinkReport rep;
    rep.location = grid[peak];
    rep.score = score[peak] / med;
    rep.bracket_lo = grid[std::max(0, i - 1)];
    rep.bracket_hi = grid[std::min(n - 1, j + 1)];
    // slope fits on up to 5 points on either side of the flagged run
    std::vector<double> lx, ly, rx, ry;
    for (int k = std::max(0, i - 5); k < i; ++k) {
      lx.push_back(grid[k]);
      ly.push_back(values[k]);
    }
    for (int k = j + 1; k <= std::min(n - 1, j + 5); ++k) {
      rx.push_back(grid[k]);
      ry.push_back(values[k]);
    }
    rep.left_slope = fit_slope(lx, ly);
    rep.right_slope = fit_slope(rx, ry);
    out.push_back(rep);
    i = j + 1;
  }
  return out;
}

std::optional<KinkReport> refine_kink(const StateFamily& f, Quantifier quant,
                                      const SeparabilityModel& m, double lo, double hi,
                                      double tol, const RobustnessOptions& ropt) {
  if (!(hi > lo)) throw InputError("refine_kink: empty bracket");
  lo = std::max(0.0, lo);
  hi = std::min(1.0, hi);

  // Only the values matter here; skip the per-solve boundary validation.
  RobustnessOptions vopt = ropt;
  vopt.validate_boundary = false;
  auto value_at = [&](double q) { return solve_point(f.at(q), quant, m, vopt).value; };

  // The slope jump J(q, h) = [f(q+h) - 2 f(q) + f(q-h)] / h tends to the
  // derivative discontinuity at a kink and to f''(q) h on smooth arcs, so
  // any search at coarse h drifts to high-curvature regions. Phase A
  // therefore localizes the maximal J at a fixed fine spacing across the
  // whole bracket; phase B halves h around the peak until it is below
  // `tol`, withdrawing the report when J decays with h (a smooth arc)
  // instead of stabilizing (a kink).
  double center = 0.5 * (lo + hi);
  double h = std::max(tol, (hi - lo) / 64.0);
  double jump_prev = 0.0, jump_cur = 0.0;
  {
    const int n = std::max(5, static_cast<int>(std::floor((hi - lo) / h)) + 1);
    std::vector<double> xs(n), vs(n);
    for (int k = 0; k < n; ++k) {
      xs[k] = lo + (hi - lo) * k / (n - 1);
      vs[k] = value_at(xs[k]);
    }
    const double step = xs[1] - xs[0];
    int best = 1;
    double best_j = -1.0;
    for (int k = 1; k + 1 < n; ++k) {
      const double j = std::abs(vs[k + 1] - 2.0 * vs[k] + vs[k - 1]) / step;
      if (j > best_j) {
        best_j = j;
        best = k;
      }
    }
    center = xs[best];
    h = step;
    jump_cur = best_j;
  }
  double sl = 0.0, sr = 0.0;
  for (int pass = 0; h > tol || pass < 1; ++pass) {
    if (pass >= 30) break;
    const double h2 = 0.5 * h;
    double x[5], v[5];
    for (int k = 0; k < 5; ++k) {
      x[k] = std::min(1.0, std::max(0.0, center + (k - 2) * h2));
      v[k] = value_at(x[k]);
    }
    int best = 1;
    double best_j = -1.0;
    for (int k = 1; k <= 3; ++k) {
      const double j = std::abs(v[k + 1] - 2.0 * v[k] + v[k - 1]) / h2;
      if (j > best_j) {
        best_j = j;
        best = k;
      }
    }
    center = x[best];
    jump_prev = jump_cur;
    jump_cur = best_j;
    sl = (v[best] - v[best - 1]) / h2;
    sr = (v[best + 1] - v[best]) / h2;
    h = h2;
  }

  if (jump_prev > 0.0 && jump_cur < 0.6 * jump_prev) return std::nullopt;
  if (jump_cur < 1e-9) return std::nullopt;

  KinkReport rep;
  rep.location = center;
  rep.bracket_lo = std::max(lo, center - h);
  rep.bracket_hi = std::min(hi, center + h);
  rep.refined = true;
  rep.left_slope = sl;
  rep.right_slope = sr;
  rep.score = jump_cur;
  return rep;
}

std::vector<std::pair<std::pair<double, double>, double>> witness_jumps(const ScanResult& scan,
                                                                        double threshold) {
  std::vector<std::pair<std::pair<double, double>, double>> out;
  std::vector<double> dists;
  for (std::size_t i = 1; i < scan.curve.size(); ++i)
    if (scan.curve[i].ok && scan.curve[i - 1].ok) dists.push_back(scan.witness_step[i]);
  if (dists.empty()) return out;
  const double max_d = *std::max_element(dists.begin(), dists.end());
  if (max_d <= 0.0) return out;
  const double med = std::max(median_of(dists), 1e-3 * max_d);
  for (std::size_t i = 1; i < scan.curve.size(); ++i) {
    if (!scan.curve[i].ok || !scan.curve[i - 1].ok) continue;
    if (scan.witness_step[i] > threshold * med)
      out.push_back({{scan.grid[i - 1], scan.grid[i]}, scan.witness_step[i]});
  }
  return out;
}

FixedWitnessScan fixed_witness_scan(const StateFamily& f, const std::vector<Witness>& witnesses,
                                    int grid_points) {
  if (witnesses.empty()) throw InputError("fixed_witness_scan: need at least one witness");
  if (grid_points < 2) throw InputError("fixed_witness_scan: need at least two grid points");
  FixedWitnessScan out;
  out.grid.resize(grid_points);
  out.expectations.assign(witnesses.size(), std::vector<double>(grid_points, 0.0));
  for (int i = 0; i < grid_points; ++i) {
    out.grid[i] = static_cast<double>(i) / (grid_points - 1);
    const DensityMatrix rho = f.at(out.grid[i]);
    for (std::size_t w = 0; w < witnesses.size(); ++w) {
      if (witnesses[w].matrix.dim() != rho.dim())
        throw InputError("fixed_witness_scan: witness dimension mismatch");
      out.expectations[w][i] = hs_inner(witnesses[w].matrix, rho.matrix());
    }
  }
  // envelope crossings of the pointwise minimum
  for (int i = 0; i + 1 < grid_points; ++i) {
    std::size_t a = 0, b = 0;
    for (std::size_t w = 1; w < witnesses.size(); ++w) {
      if (out.expectations[w][i] < out.expectations[a][i]) a = w;
      if (out.expectations[w][i + 1] < out.expectations[b][i + 1]) b = w;
    }
    if (a == b) continue;
    const double da = out.expectations[a][i] - out.expectations[b][i];
    const double db = out.expectations[a][i + 1] - out.expectations[b][i + 1];
    if (std::abs(da - db) < 1e-300) continue;
    const double t = da / (da - db);
    out.envelope_crossings.push_back(out.grid[i] + t * (out.grid[i + 1] - out.grid[i]));
  }
  return out;
}

std::vector<PhaseInterval> phase_labels(const std::vector<double>& grid,
                                        const std::vector<double>& values,
                                        const std::vector<KinkReport>& kinks, double tol) {
  if (grid.size() != values.size() || grid.empty())
    throw InputError("phase_labels: bad input sizes");
  const int n = static_cast<int>(grid.size());

  // First pass: separable vs entangled runs.
  struct Seg {
    double lo, hi;
    bool sep;
  };
  std::vector<Seg> segs;
  int i = 0;
  while (i < n) {
    const bool sep = values[i] <= tol;
    int j = i;
    while (j + 1 < n && (values[j + 1] <= tol) == sep) ++j;
    segs.push_back({grid[i], grid[j], sep});
    i = j + 1;
  }
  // make the intervals tile the scanned range: adjacent segments meet at
  // the midpoint between their boundary grid points
  for (std::size_t k = 0; k + 1 < segs.size(); ++k) {
    const double mid = 0.5 * (segs[k].hi + segs[k + 1].lo);
    segs[k].hi = mid;
    segs[k + 1].lo = mid;
  }
  // Second pass: split entangled runs at kink locations.
  std::vector<PhaseInterval> out;
  int ent = 0;
  for (const auto& s : segs) {
    if (s.sep) {
      out.push_back({s.lo, s.hi, "Separable"});
      continue;
    }
    std::vector<double> cuts;
    for (const auto& k : kinks)
      if (k.location > s.lo && k.location < s.hi) cuts.push_back(k.location);
    std::sort(cuts.begin(), cuts.end());
    double lo = s.lo;
    for (double c : cuts) {
      out.push_back({lo, c, "Entangled-" + std::to_string(++ent)});
      lo = c;
    }
    out.push_back({lo, s.hi, "Entangled-" + std::to_string(++ent)});
  }
  return out;
}

double fit_two_segment_breakpoint(const std::vector<double>& grid,
                                  const std::vector<double>& values) {
  const int n = static_cast<int>(grid.size());
  if (n < 7) throw InputError("two-segment fit needs at least 7 points");
  auto sse = [&](int a, int b) {  // OLS residual on [a, b]
    const int m = b - a + 1;
    double mx = 0.0, my = 0.0;
    for (int k = a; k <= b; ++k) {
      mx += grid[k];
      my += values[k];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int k = a; k <= b; ++k) {
      sxx += (grid[k] - mx) * (grid[k] - mx);
      sxy += (grid[k] - mx) * (values[k] - my);
      syy += (values[k] - my) * (values[k] - my);
    }
    return sxx > 0.0 ? syy - sxy * sxy / sxx : syy;
  };
  int best = 3;
  double best_sse = 1e300;
  for (int k = 3; k <= n - 4; ++k) {
    const double s = sse(0, k) + sse(k, n - 1);
    if (s < best_sse) {
      best_sse = s;
      best = k;
    }
  }
  return grid[best];
}

}  // namespace qrob
