#ifndef ATOMCOV_SIMKIT_HPP
#define ATOMCOV_SIMKIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "atomcov/atom.hpp"
#include "atomcov/hermmat.hpp"
#include "atomcov/structsets.hpp"

namespace atomcov {

/// Line-spectrum covariance model: R = sum_i p_i a(w_i) a(w_i)^H + s2 I
/// with [a(w)]_q = exp(j (q-1) w).
struct LineSpectrumModel {
  int m = 0;
  std::vector<double> frequencies;  // rad
  std::vector<double> powers;       // nonnegative
  double noise_floor = 0.0;         // s2

  void validate() const;
};

/// Uniform linear array with uncorrelated narrow-band jammers.
struct JammerScenario {
  int m = 0;
  double spacing = 0.5;                  // element spacing in wavelengths
  std::vector<double> jammer_deg;        // directions, each in (-90, 90)
  std::vector<double> jammer_power_db;   // per-jammer power in dB
  double white_db = 0.0;                 // white noise level in dB

  void validate() const;
};

struct BenchResult {
  std::vector<std::string> methods;
  std::vector<int> n_grid;
  std::vector<std::vector<double>> mse;       // [method][n index]
  std::vector<std::vector<double>> avg_time;  // mean fit seconds, same shape
  std::vector<std::vector<int>> failures;     // estimator failures, same shape
  std::vector<double> crb;                    // per n; NaN when unavailable
  int trials = 0;
  std::uint64_t seed = 0;
};

/// One estimation method entry for benchmarks and experiments.
/// name: atom1 | atom2 | scm | fb | oracle. label defaults to name.
struct MethodConfig {
  std::string name;
  std::string label;
  StructureSpec fit_spec;  // atom2 structure; m == 0 means data-sized Toeplitz
  Atom1Options atom1;
  Atom2Options atom2;
};

HermMat cov_line_spectrum(const LineSpectrumModel& model);

/// Kronecker TBT truth R = t1 (x) t1 for a Hermitian Toeplitz t1.
HermMat cov_kron_tbt(const HermMat& t1);

/// Banded Toeplitz PSD truth built by alternating projections between the
/// banded Toeplitz set and the PSD cone from a seeded random Hermitian
/// start, plus noise_floor * I to make it PD.
HermMat cov_banded_pocs(int m, int b, std::uint64_t seed, double noise_floor = 1.0);

/// n i.i.d. circular Gaussian snapshots y_k = R^{1/2} n_k with unit
/// mean-square entries in n_k; deterministic given seed.
SnapshotSet sample_snapshots(const HermMat& r, int n, std::uint64_t seed);

/// Deterministic per-trial substream seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Run one estimation method on a snapshot set; truth is required by the
/// "oracle" method only.
HermMat run_method(const MethodConfig& method, const SnapshotSet& samples,
                   const HermMat* truth = nullptr);

/// Monte-Carlo MSE of theta(P_spec(R_hat)) against theta(truth) per method
/// and sample count, with the CRB alongside (when spec has a basis).
BenchResult mse_benchmark(const HermMat& truth, const StructureSpec& spec,
                          const std::vector<MethodConfig>& methods, const std::vector<int>& n_grid,
                          int trials, std::uint64_t seed, int jobs = 1);

/// Unit-norm ULA steering vector for direction phi (degrees).
CVec steering(double phi_deg, int m, double spacing = 0.5);

/// Interference covariance R = sum_l s_l^2 s(phi_l) s(phi_l)^H + s_a^2 I.
HermMat jammer_cov(const JammerScenario& sc);

struct SinrResult {
  std::vector<double> theta_deg;
  std::vector<std::string> methods;        // estimator rows, "smi" included when available
  std::vector<std::vector<double>> sinr;   // [method][theta], linear scale
  std::vector<double> sinr_opt;            // per theta
  std::vector<std::string> warnings;
  int trials = 0;
  std::uint64_t seed = 0;
};

/// 500 equally spaced direction midpoints strictly inside (-90, 90).
std::vector<double> default_theta_grid(int points = 500);

/// Average adaptive-beamformer SINR over K Monte-Carlo trials per method
/// and direction, with the optimum s^H R^{-1} s row alongside. The "smi"
/// method is reported only for n > m and marked absent otherwise.
SinrResult sinr_experiment(const JammerScenario& sc, const std::vector<MethodConfig>& methods,
                           int n, int trials, const std::vector<double>& theta_deg,
                           std::uint64_t seed, int jobs = 1);

}  // namespace atomcov

#endif
