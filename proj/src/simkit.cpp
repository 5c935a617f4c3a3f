#include "atomcov/simkit.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "atomcov/crb.hpp"
#include "atomcov/errors.hpp"
#include "atomcov/hermlin.hpp"

namespace atomcov {

void LineSpectrumModel::validate() const {
  if (m < 1) throw DimensionError("LineSpectrumModel: m must be positive");
  if (frequencies.size() != powers.size())
    throw DimensionError("LineSpectrumModel: frequencies/powers length mismatch");
  for (double p : powers)
    if (p < 0.0) throw DimensionError("LineSpectrumModel: powers must be nonnegative");
  if (noise_floor < 0.0) throw DimensionError("LineSpectrumModel: negative noise floor");
}

void JammerScenario::validate() const {
  if (m < 2) throw DimensionError("JammerScenario: m must be at least 2");
  if (jammer_deg.size() != jammer_power_db.size())
    throw DimensionError("JammerScenario: angles/powers length mismatch");
  for (double a : jammer_deg)
    if (!(a > -90.0 && a < 90.0))
      throw DimensionError("JammerScenario: jammer angle outside (-90, 90)");
}

HermMat cov_line_spectrum(const LineSpectrumModel& model) {
  model.validate();
  CVec row = CVec::Zero(model.m);
  for (size_t i = 0; i < model.frequencies.size(); ++i) {
    const double w = model.frequencies[i], p = model.powers[i];
    for (int d = 0; d < model.m; ++d) row(d) += p * std::polar(1.0, d * w);
  }
  row(0) = Complex(row(0).real() + model.noise_floor, 0.0);
  CMat r(model.m, model.m);
  for (int i = 0; i < model.m; ++i)
    for (int k = 0; k < model.m; ++k)
      r(i, k) = k >= i ? row(k - i) : std::conj(row(i - k));
  return HermMat::from_hermitian_part(r);
}

HermMat cov_kron_tbt(const HermMat& t1) {
  return HermMat::from_hermitian_part(kron(t1.mat(), t1.mat()));
}

HermMat cov_banded_pocs(int m, int b, std::uint64_t seed, double noise_floor) {
  StructureSpec::banded(m, b);  // validates
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat a(m, m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) a(i, k) = Complex(normal(rng), normal(rng));
  a = 0.5 * (a + a.adjoint().eval());
  for (int it = 0; it < 2000; ++it) {
    const CMat next = detail::proj_banded_raw(detail::proj_psd_raw(a), b);
    const double delta = (next - a).norm();
    a = next;
    if (delta <= 1e-12 * (1.0 + a.norm())) break;
  }
  a += noise_floor * CMat::Identity(m, m);
  return HermMat::from_hermitian_part(a);
}

SnapshotSet sample_snapshots(const HermMat& r, int n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("sample_snapshots: n must be positive");
  const HermMat w = sqrt_psd(r);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CMat nk(r.dim(), n);
  for (int k = 0; k < n; ++k)
    for (Eigen::Index q = 0; q < r.dim(); ++q) {
      const double g1 = normal(rng), g2 = normal(rng);
      nk(q, k) = Complex(g1 * inv_sqrt2, g2 * inv_sqrt2);
    }
  return SnapshotSet{w.mat() * nk, seed};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

HermMat run_method(const MethodConfig& method, const SnapshotSet& samples, const HermMat* truth) {
  if (method.name == "scm") return scm(samples);
  if (method.name == "fb") return fb_average(scm(samples));
  if (method.name == "oracle") {
    if (truth == nullptr) throw DimensionError("run_method: oracle needs the truth matrix");
    return *truth;
  }
  const HermMat r_fb = fb_average(scm(samples));
  const DataFactor y = factor_data(r_fb);
  if (method.name == "atom1") return atom1(y, method.atom1).r_hat;
  if (method.name == "atom2") {
    Atom2Options opts = method.atom2;
    opts.spec = method.fit_spec;
    return atom2(y, opts).r_hat;
  }
  throw ConfigError("run_method: unknown method '" + method.name + "'");
}

namespace {

void parallel_trials(int trials, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&, j]() {
      for (int t = j; t < trials; t += jobs) {
        try {
          body(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

BenchResult mse_benchmark(const HermMat& truth, const StructureSpec& spec,
                          const std::vector<MethodConfig>& methods, const std::vector<int>& n_grid,
                          int trials, std::uint64_t seed, int jobs) {
  spec.validate();
  if (trials < 1) throw DimensionError("mse_benchmark: trials must be positive");
  const ThetaVec theta_true = theta_from_struct(truth, spec);

  BenchResult out;
  out.trials = trials;
  out.seed = seed;
  out.n_grid = n_grid;
  for (const auto& mth : methods) out.methods.push_back(mth.label.empty() ? mth.name : mth.label);
  const size_t nm = methods.size();
  out.mse.assign(nm, std::vector<double>(n_grid.size(), 0.0));
  out.avg_time.assign(nm, std::vector<double>(n_grid.size(), 0.0));
  out.failures.assign(nm, std::vector<int>(n_grid.size(), 0));
  out.crb.assign(n_grid.size(), std::numeric_limits<double>::quiet_NaN());

  if (spec.kind != StructKind::kBlockToeplitz) {
    const BasisSet basis = derivs_for(spec);
    for (size_t ni = 0; ni < n_grid.size(); ++ni)
      out.crb[ni] = crb_trace(fim(truth, basis, n_grid[ni])).crb;
  }

  struct TrialCell {
    double err = 0.0;
    double secs = 0.0;
    bool failed = false;
  };

  for (size_t ni = 0; ni < n_grid.size(); ++ni) {
    std::vector<std::vector<TrialCell>> cells(trials, std::vector<TrialCell>(nm));
    parallel_trials(trials, jobs, [&](int trial) {
      const std::uint64_t s = mix_seed(seed, ni * static_cast<std::uint64_t>(trials) + trial);
      const SnapshotSet samples = sample_snapshots(truth, n_grid[ni], s);
      for (size_t mi = 0; mi < nm; ++mi) {
        TrialCell& cell = cells[trial][mi];
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const HermMat r_hat = run_method(methods[mi], samples, &truth);
          const ThetaVec theta_hat = theta_from_struct(proj_struct(r_hat, spec), spec);
          cell.err = (theta_true.values - theta_hat.values).squaredNorm();
        } catch (const std::exception&) {
          cell.failed = true;
        }
        cell.secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      }
    });
    for (size_t mi = 0; mi < nm; ++mi) {
      double acc = 0.0, secs = 0.0;
      int ok = 0;
      for (int trial = 0; trial < trials; ++trial) {
        const TrialCell& cell = cells[trial][mi];
        secs += cell.secs;
        if (cell.failed) {
          ++out.failures[mi][ni];
        } else {
          acc += cell.err;
          ++ok;
        }
      }
      out.mse[mi][ni] = ok > 0 ? acc / ok : std::numeric_limits<double>::quiet_NaN();
      out.avg_time[mi][ni] = secs / trials;
    }
  }
  return out;
}

CVec steering(double phi_deg, int m, double spacing) {
  if (m < 1) throw DimensionError("steering: m must be positive");
  const double phase = 2.0 * std::numbers::pi * spacing *
                       std::sin(phi_deg * std::numbers::pi / 180.0);
  CVec s(m);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int q = 0; q < m; ++q) s(q) = std::polar(scale, q * phase);
  return s;
}

HermMat jammer_cov(const JammerScenario& sc) {
  sc.validate();
  CMat r = std::pow(10.0, sc.white_db / 10.0) * CMat::Identity(sc.m, sc.m);
  for (size_t l = 0; l < sc.jammer_deg.size(); ++l) {
    const CVec s = steering(sc.jammer_deg[l], sc.m, sc.spacing);
    r += std::pow(10.0, sc.jammer_power_db[l] / 10.0) * (s * s.adjoint());
  }
  return HermMat::from_hermitian_part(r);
}

std::vector<double> default_theta_grid(int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = -90.0 + 180.0 * (i + 0.5) / points;
  return grid;
}

namespace {

// R_hat floored to PD when needed; sets flag when the floor was applied.
CMat pd_weight_matrix(const HermMat& r_hat, bool* floored) {
  Eigen::SelfAdjointEigenSolver<CMat> es(r_hat.mat());
  const double lmax = std::max(es.eigenvalues()(es.eigenvalues().size() - 1), 0.0);
  const double floor_value = lmax > 0.0 ? 1e-10 * lmax : 1e-12;
  if (es.eigenvalues()(0) > 0.0) return r_hat.mat();
  *floored = true;
  RVec lam = es.eigenvalues().cwiseMax(floor_value);
  CMat out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint().eval());
}

}  // namespace

SinrResult sinr_experiment(const JammerScenario& sc, const std::vector<MethodConfig>& methods,
                           int n, int trials, const std::vector<double>& theta_deg,
                           std::uint64_t seed, int jobs) {
  sc.validate();
  if (trials < 1) throw DimensionError("sinr_experiment: need at least one trial");
  for (double th : theta_deg)
    if (!(th > -90.0 && th < 90.0))
      throw DimensionError("sinr_experiment: grid angle outside (-90, 90)");

  const HermMat r = jammer_cov(sc);
  const int m = sc.m;
  const size_t nt = theta_deg.size();

  CMat s_grid(m, nt);
  for (size_t i = 0; i < nt; ++i) s_grid.col(i) = steering(theta_deg[i], m, sc.spacing);

  SinrResult out;
  out.theta_deg = theta_deg;
  out.trials = trials;
  out.seed = seed;
  out.sinr_opt.resize(nt);
  const CMat rinv_s = solve_pd(r, s_grid);
  for (size_t i = 0; i < nt; ++i)
    out.sinr_opt[i] = (s_grid.col(i).adjoint() * rinv_s.col(i))(0, 0).real();

  std::vector<MethodConfig> rows = methods;
  const bool smi_ok = n > m;
  if (smi_ok) {
    MethodConfig smi;
    smi.name = "scm";
    smi.label = "smi";
    rows.push_back(smi);
  } else {
    out.warnings.push_back("smi absent: requires n > m");
  }
  for (const auto& mth : rows) out.methods.push_back(mth.label.empty() ? mth.name : mth.label);

  const size_t nm = rows.size();
  std::vector<std::vector<std::vector<double>>> per_trial(
      trials, std::vector<std::vector<double>>(nm, std::vector<double>(nt, 0.0)));
  std::vector<std::vector<char>> trial_ok(trials, std::vector<char>(nm, 1));
  std::vector<std::vector<char>> trial_floored(trials, std::vector<char>(nm, 0));

  parallel_trials(trials, jobs, [&](int trial) {
    const SnapshotSet samples = sample_snapshots(r, n, mix_seed(seed, trial));
    for (size_t mi = 0; mi < nm; ++mi) {
      try {
        const HermMat r_hat = run_method(rows[mi], samples, &r);
        bool floored = false;
        const CMat r_w = pd_weight_matrix(r_hat, &floored);
        trial_floored[trial][mi] = floored ? 1 : 0;
        const CMat w = solve_pd(HermMat::from_hermitian_part(r_w), s_grid);
        for (size_t i = 0; i < nt; ++i) {
          const Complex num = (w.col(i).adjoint() * s_grid.col(i))(0, 0);
          const double den = (w.col(i).adjoint() * r.mat() * w.col(i))(0, 0).real();
          per_trial[trial][mi][i] = std::norm(num) / den;
        }
      } catch (const std::exception&) {
        trial_ok[trial][mi] = 0;
      }
    }
  });

  out.sinr.assign(nm, std::vector<double>(nt, 0.0));
  for (size_t mi = 0; mi < nm; ++mi) {
    int ok = 0;
    bool any_floor = false;
    for (int trial = 0; trial < trials; ++trial) {
      if (!trial_ok[trial][mi]) continue;
      ++ok;
      any_floor = any_floor || trial_floored[trial][mi];
      for (size_t i = 0; i < nt; ++i) out.sinr[mi][i] += per_trial[trial][mi][i];
    }
    for (size_t i = 0; i < nt; ++i)
      out.sinr[mi][i] = ok > 0 ? out.sinr[mi][i] / ok : std::numeric_limits<double>::quiet_NaN();
    if (ok < trials)
      out.warnings.push_back(out.methods[mi] + ": " + std::to_string(trials - ok) +
                             " failed trials");
    if (any_floor)
      out.warnings.push_back(out.methods[mi] + ": singular estimate floored in some trials");
  }
  return out;
}

}  // namespace atomcov
