#include "hipsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

#include "hipsim/abouaf.hpp"
#include "hipsim/errors.hpp"

namespace hipsim {

namespace {

constexpr double kPenalty = 1e9;

// --------------------------------------------------------------------------
// Derivative-free simplex minimization (Nelder-Mead). Two parameters at most
// in this module; convergence on relative simplex size.
// --------------------------------------------------------------------------

struct NmResult {
  std::vector<double> x;
  double fval = 0.0;
  int evals = 0;
};

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                     const std::vector<double>& x0,
                     const std::vector<double>& steps, double rel_tol,
                     int max_evals) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> xs(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += steps[i];
  std::vector<double> fs(n + 1);
  int evals = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    fs[i] = fn(xs[i]);
    ++evals;
  }

  auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> xs2;
    std::vector<double> fs2;
    for (std::size_t i : idx) {
      xs2.push_back(xs[i]);
      fs2.push_back(fs[i]);
    }
    xs = std::move(xs2);
    fs = std::move(fs2);
  };

  while (evals < max_evals) {
    order();
    // Relative simplex diameter.
    double diam = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diam = std::max(diam, std::abs(xs[i][j] - xs[0][j]) /
                                  (1.0 + std::abs(xs[0][j])));
      }
    }
    if (diam < rel_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += xs[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto affine = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) {
        x[j] = centroid[j] + coef * (xs[n][j] - centroid[j]);
      }
      return x;
    };

    const std::vector<double> xr = affine(-1.0);
    const double fr = fn(xr);
    ++evals;
    if (fr < fs[0]) {
      const std::vector<double> xe = affine(-2.0);
      const double fe = fn(xe);
      ++evals;
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      const std::vector<double> xc = affine(fr < fs[n] ? -0.5 : 0.5);
      const double fc = fn(xc);
      ++evals;
      if (fc < std::min(fr, fs[n])) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
          }
          fs[i] = fn(xs[i]);
          ++evals;
        }
      }
    }
  }
  order();
  return {xs[0], fs[0], evals};
}

std::string format_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

double simulate_sigma02(const MaterialTables& tables, double T, double rate,
                        double rho0, const IntegratorOptions& opt) {
  LoadingProgram prog;
  UniaxialCompression uni;
  uni.strain_rate = rate;
  uni.T = T;
  uni.duration = 0.015 / rate;  // 1.5% total strain covers the 0.2% offset
  prog.mode = uni;
  prog.rho0 = rho0;
  const IntegrateResult res = integrate(prog, AbouafModel{}, tables, opt);
  if (!res.completed) {
    throw DataError("yield probe failed: " + res.failure);
  }
  return extract_yield_stress(res.trajectory,
                              tables.youngs_modulus(rho0, T));
}

AnFitResult calibrate_AN(const std::vector<DenseYieldPoint>& dense_yield,
                         const MaterialTables& base,
                         const CalibrationConfig& cfg) {
  AnFitResult out;
  if (dense_yield.empty()) {
    out.message = "step 1: no dense yield data";
    return out;
  }
  for (const auto& row : dense_yield) {
    if (!(row.sigma02 > 0.0) || !(row.strain_rate > 0.0)) {
      out.message = "step 1: yield stresses and strain rates must be > 0";
      return out;
    }
  }

  // Group rows by temperature; each temperature is fitted independently, so
  // the input order is irrelevant.
  std::map<double, std::vector<DenseYieldPoint>> groups;
  for (const auto& row : dense_yield) groups[row.T].push_back(row);
  for (auto& [T, rows] : groups) {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.strain_rate < b.strain_rate;
    });
  }

  std::vector<double> T_keys, A_vals, N_vals;
  bool all_ok = true;
  std::string first_failure;

  for (const auto& [T, rows] : groups) {
    // Seed.
    double N0 = cfg.seed.N0.value_or(5.0);
    if (!cfg.seed.N0_T.empty()) {
      N0 = LinearTable(cfg.seed.N0_T, cfg.seed.N0_values, "N0(T)")(T);
    } else if (!cfg.seed.N0 && rows.size() >= 2 &&
               rows.back().strain_rate > rows.front().strain_rate * (1.0 + 1e-9)) {
      const double num = std::log(rows.back().strain_rate / rows.front().strain_rate);
      const double den = std::log(rows.back().sigma02 / rows.front().sigma02);
      if (den > 1e-12) N0 = std::clamp(num / den, 1.0, 15.0);
    }
    const double A0 = cfg.seed.A0.value_or(
        rows.front().strain_rate / std::pow(rows.front().sigma02, N0));

    auto objective = [&](double A, double N) {
      if (!(A > 0.0) || !(N >= 1.0) || N > 20.0) return kPenalty;
      MaterialTables probe =
          base.with_AN(LinearTable({T}, {A}, "A"), LinearTable({T}, {N}, "N"));
      double sum = 0.0;
      for (const auto& row : rows) {
        double sim;
        try {
          sim = simulate_sigma02(probe, T, row.strain_rate, 1.0, cfg.integrator);
        } catch (const DataError&) {
          return kPenalty;
        }
        const double rel = (sim - row.sigma02) / row.sigma02;
        sum += rel * rel;
      }
      return std::sqrt(sum / static_cast<double>(rows.size()));
    };

    NmResult nm;
    if (cfg.seed.fix_N) {
      nm = nelder_mead(
          [&](const std::vector<double>& x) {
            return objective(std::pow(10.0, x[0]), N0);
          },
          {std::log10(A0)}, {0.3}, cfg.simplex_rel_tol, cfg.max_evals);
      nm.x.push_back(N0);
    } else {
      nm = nelder_mead(
          [&](const std::vector<double>& x) {
            return objective(std::pow(10.0, x[0]), x[1]);
          },
          {std::log10(A0), N0}, {0.3, 0.5}, cfg.simplex_rel_tol, cfg.max_evals);
    }
    const double A = std::pow(10.0, nm.x[0]);
    const double N = nm.x[1];

    MaterialTables fitted =
        base.with_AN(LinearTable({T}, {A}, "A"), LinearTable({T}, {N}, "N"));
    double worst = 0.0;
    for (const auto& row : rows) {
      FitReportEntry e;
      e.T = T;
      e.rho = 1.0;
      e.target = row.sigma02;
      try {
        e.achieved = simulate_sigma02(fitted, T, row.strain_rate, 1.0,
                                      cfg.integrator);
      } catch (const DataError&) {
        e.achieved = 0.0;
      }
      e.rel_err = std::abs(e.achieved - e.target) / e.target;
      e.evals = nm.evals;
      worst = std::max(worst, e.rel_err);
      out.report.push_back(e);
    }
    if (worst > cfg.yield_rel_tol) {
      all_ok = false;
      if (first_failure.empty()) {
        first_failure = "step 1: fit at T = " + format_num(T) +
                        " degC did not reach tolerance (worst rel err " +
                        format_num(worst) + ")";
      }
    }
    T_keys.push_back(T);
    A_vals.push_back(A);
    N_vals.push_back(N);
  }

  out.A_table = LinearTable(T_keys, A_vals, "A(T)");
  out.N_table = LinearTable(T_keys, N_vals, "N(T)");
  out.ok = all_ok;
  out.message = all_ok ? "" : first_failure + " (best-so-far returned)";
  return out;
}

FTableResult invert_f(const std::vector<DensificationPoint>& densification,
                      const HipSchedule& schedule, const LinearTable& A_table,
                      const LinearTable& N_table, bool use_printed_inversion) {
  FTableResult out;
  if (densification.size() < 3) {
    out.message = "step 2: need at least 3 densification samples";
    return out;
  }
  std::vector<DensificationPoint> pts = densification;
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.t < b.t; });

  // 3-point moving average; raw interrupted-HIP densities are sparse and the
  // central differences below amplify sample-level scatter.
  const std::size_t n = pts.size();
  std::vector<double> sm(n);
  sm[0] = pts[0].rho;
  sm[n - 1] = pts[n - 1].rho;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    sm[i] = (pts[i - 1].rho + pts[i].rho + pts[i + 1].rho) / 3.0;
  }

  std::vector<std::pair<double, double>> samples;  // (rho, f)
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double rdot = (sm[i + 1] - sm[i - 1]) / (pts[i + 1].t - pts[i - 1].t);
    if (!(rdot > 0.0)) {
      ++out.skipped;
      out.warnings.push_back("step 2: sample at t = " + format_num(pts[i].t) +
                             " s skipped (nonpositive densification rate)");
      continue;
    }
    const double P = schedule.pressure(pts[i].t);
    if (!(P > 0.0)) {
      ++out.skipped;
      out.warnings.push_back("step 2: sample at t = " + format_num(pts[i].t) +
                             " s skipped (no applied pressure)");
      continue;
    }
    const double T = schedule.temperature(pts[i].t);
    const double A = A_table(T);
    const double N = N_table(T);
    const double absI1 = 3.0 * P;
    const double denom = use_printed_inversion
                             ? sm[i] * A * std::pow(absI1, N)
                             : 3.0 * sm[i] * A * std::pow(absI1, N);
    const double f = std::pow(rdot / denom, 2.0 / (N + 1.0));
    if (sm[i] < 1.0 - 1e-9) samples.emplace_back(sm[i], f);
    ++out.used;
  }
  if (samples.size() < 2) {
    out.message = "step 2: fewer than 2 usable densification samples";
    return out;
  }
  std::sort(samples.begin(), samples.end());

  std::vector<double> keys, vals;
  for (const auto& [rho, f] : samples) {
    if (!keys.empty() && rho - keys.back() < 1e-12) {
      vals.back() = 0.5 * (vals.back() + f);  // duplicate density: average
    } else {
      keys.push_back(rho);
      vals.push_back(f);
    }
  }
  keys.push_back(1.0);
  vals.push_back(0.0);
  out.f_table = LinearTable(keys, vals, "f(rho)");
  out.ok = true;
  return out;
}

CTableResult calibrate_c(const std::vector<PorousYieldPoint>& porous_yield,
                         const MaterialTables& tables,
                         const CalibrationConfig& cfg) {
  CTableResult out;
  if (porous_yield.empty()) {
    out.message = "step 3: no porous yield data";
    return out;
  }
  std::vector<PorousYieldPoint> rows = porous_yield;
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.rho != b.rho ? a.rho < b.rho : a.T < b.T;
  });

  std::vector<double> keys, vals;
  bool all_ok = true;
  std::string first_failure;

  for (const auto& row : rows) {
    if (!(row.sigma02 > 0.0) || !(row.strain_rate > 0.0) || !(row.rho > 0.0) ||
        row.rho > 1.0) {
      out.message = "step 3: invalid porous yield row";
      return out;
    }
    FitReportEntry e;
    e.T = row.T;
    e.rho = row.rho;
    e.target = row.sigma02;

    double c_final;
    if (row.rho >= 1.0 - 1e-12) {
      // Dense limit: c = 1 enforced, no optimization.
      c_final = 1.0;
      e.achieved = row.sigma02;
      e.rel_err = 0.0;
    } else {
      const auto [A, N] = std::pair{tables.A_table()(row.T),
                                    tables.N_table()(row.T)};
      const double f = tables.f_table()(row.rho);
      const double arg = row.strain_rate / (A * std::pow(row.sigma02, N));
      double c0;
      if (cfg.use_printed_inversions && N > 1.0 + 1e-9) {
        c0 = std::pow(arg, 2.0 / (N - 1.0)) - f;
      } else {
        c0 = std::pow(arg, 2.0 / (N + 1.0)) - f;
      }
      if (!(c0 > cfg.c_floor)) {
        out.warnings.push_back("step 3: seed c <= 0 at rho = " +
                               format_num(row.rho) + ", clipped to floor");
        c0 = cfg.c_floor;
      }

      auto sigma_at = [&](double c) {
        MaterialTables probe = tables.with_cf(
            LinearTable({row.rho}, {c}, "c"), tables.f_table());
        return simulate_sigma02(probe, row.T, row.strain_rate, row.rho,
                                cfg.integrator);
      };

      // sigma02 decreases monotonically in c: bracket a sign change of
      // g(c) = sigma_sim(c) - sigma_exp, then bisect keeping the best
      // iterate, so the reported error never increases.
      const double tol_abs = cfg.step3_rel_tol * row.sigma02;
      double lo = std::max(cfg.c_floor, c0 / 4.0);
      double hi = std::max(c0 * 4.0, lo * 4.0);
      double best_c = c0, best_err = 1e300, best_sigma = 0.0;
      int evals = 0;
      auto g = [&](double c) {
        const double s = sigma_at(c);
        ++evals;
        const double err = std::abs(s - row.sigma02);
        if (err < best_err) {
          best_err = err;
          best_c = c;
          best_sigma = s;
        }
        e.error_trace.push_back(best_err);
        return s - row.sigma02;
      };
      try {
        double g_lo = g(lo);
        while (g_lo < 0.0 && lo > cfg.c_floor * (1.0 + 1e-12) && evals < 40) {
          lo = std::max(cfg.c_floor, lo * 0.25);
          g_lo = g(lo);
        }
        double g_hi = g(hi);
        while (g_hi > 0.0 && evals < 60 && hi < 1e6) {
          hi *= 4.0;
          g_hi = g(hi);
        }
        if (g_lo >= 0.0 && g_hi <= 0.0) {
          while (best_err > tol_abs && hi - lo > 1e-9 * hi && evals < 120) {
            const double mid = 0.5 * (lo + hi);
            const double g_mid = g(mid);
            if (g_mid > 0.0) {
              lo = mid;
            } else {
              hi = mid;
            }
          }
        }
      } catch (const DataError& ex) {
        all_ok = false;
        if (first_failure.empty()) {
          first_failure = std::string("step 3: probe failed at rho = ") +
                          format_num(row.rho) + ": " + ex.what();
        }
      }
      e.evals = evals;
      e.achieved = best_sigma;
      e.rel_err = (best_err < 1e300) ? best_err / row.sigma02 : 1.0;
      c_final = best_c;
      if (best_err > tol_abs) {
        all_ok = false;
        if (first_failure.empty()) {
          first_failure = "step 3: refinement at rho = " + format_num(row.rho) +
                          " did not reach tolerance (rel err " +
                          format_num(best_err / row.sigma02) + ")";
        }
      }
    }

    if (!keys.empty() && row.rho - keys.back() < 1e-12) {
      vals.back() = 0.5 * (vals.back() + c_final);
      out.warnings.push_back("step 3: duplicate rho = " + format_num(row.rho) +
                             ", averaged");
    } else {
      keys.push_back(row.rho);
      vals.push_back(c_final);
    }
    out.report.push_back(e);
  }

  out.c_table = LinearTable(keys, vals, "c(rho)");
  out.ok = all_ok;
  out.message = all_ok ? "" : first_failure + " (best-so-far returned)";
  return out;
}

std::string CalibrationResult::report_text() const {
  std::ostringstream os;
  os << "calibration pipeline: "
     << (status == PipelineStatus::Ok          ? "OK"
         : status == PipelineStatus::FailedStep1 ? "FAILED at step 1 (partial result)"
         : status == PipelineStatus::FailedStep2 ? "FAILED at step 2 (partial result)"
                                                 : "FAILED at step 3 (partial result)")
     << "\n";
  if (!message.empty()) os << "  " << message << "\n";
  os << "step 1 (A, N from dense yield):\n";
  for (const auto& e : step1_report) {
    os << "  T = " << format_num(e.T) << " degC: target " << format_num(e.target)
       << " MPa, achieved " << format_num(e.achieved) << " MPa, rel err "
       << format_num(e.rel_err) << ", evals " << e.evals << "\n";
  }
  os << "step 2 (f from densification rate): used " << step2_used
     << " samples, skipped " << step2_skipped << "\n";
  os << "step 3 (c from porous yield):\n";
  for (const auto& e : step3_report) {
    os << "  T = " << format_num(e.T) << " degC, rho = " << format_num(e.rho)
       << ": target " << format_num(e.target) << " MPa, rel err "
       << format_num(e.rel_err) << ", evals " << e.evals << "\n";
  }
  for (const auto& w : warnings) os << "warning: " << w << "\n";
  return os.str();
}

CalibrationResult run_pipeline(const CalibrationDataset& dataset,
                               const MaterialTables& base,
                               const CalibrationConfig& cfg) {
  CalibrationResult result;
  result.tables = base;

  for (std::size_t i = 1; i < dataset.densification.size(); ++i) {
    if (dataset.densification[i].rho < dataset.densification[i - 1].rho - 1e-12 &&
        dataset.densification[i].t > dataset.densification[i - 1].t) {
      result.warnings.push_back(
          "dataset: densification density decreases at t = " +
          format_num(dataset.densification[i].t) + " s");
    }
  }

  const AnFitResult step1 = calibrate_AN(dataset.dense_yield, base, cfg);
  result.step1_report = step1.report;
  if (!step1.A_table.empty()) {
    result.tables = result.tables.with_AN(step1.A_table, step1.N_table);
  }
  if (!step1.ok) {
    result.status = PipelineStatus::FailedStep1;
    result.message = step1.message.empty() ? "step 1 failed" : step1.message;
    return result;
  }

  if (dataset.densification.empty()) {
    result.status = PipelineStatus::FailedStep2;
    result.message = "step 2: dataset has no densification samples";
    return result;
  }
  const FTableResult step2 =
      invert_f(dataset.densification, dataset.schedule, step1.A_table,
               step1.N_table, cfg.use_printed_inversions);
  result.step2_used = step2.used;
  result.step2_skipped = step2.skipped;
  result.warnings.insert(result.warnings.end(), step2.warnings.begin(),
                         step2.warnings.end());
  if (!step2.ok) {
    result.status = PipelineStatus::FailedStep2;
    result.message = step2.message;
    return result;
  }
  result.tables = result.tables.with_cf(LinearTable({1.0}, {1.0}, "c"),
                                        step2.f_table);

  const CTableResult step3 = calibrate_c(dataset.porous_yield, result.tables, cfg);
  result.step3_report = step3.report;
  result.warnings.insert(result.warnings.end(), step3.warnings.begin(),
                         step3.warnings.end());
  if (!step3.c_table.empty()) {
    result.tables = result.tables.with_cf(step3.c_table, step2.f_table);
  }
  if (!step3.ok) {
    result.status = PipelineStatus::FailedStep3;
    result.message = step3.message.empty() ? "step 3 failed" : step3.message;
    return result;
  }
  return result;
}

}  // namespace hipsim
