#ifndef ATOMCOV_ATOM_HPP
#define ATOMCOV_ATOM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "atomcov/hermmat.hpp"
#include "atomcov/structsets.hpp"

namespace atomcov {

struct Atom1Options {
  double rho = 1.0;
  double outer_tol = 1e-4;
  double inner_tol = 1e-6;
  int max_outer = 1000;
  int max_inner = 500;
  std::uint64_t seed = 0;  // initial multiplier draw
};

struct Atom2Options {
  double gamma0 = 1e-4;
  double k1 = 5.0;
  double outer_tol = 1e-4;
  int max_outer = 1000;
  StructureSpec spec;  // spec.m == 0 means "Toeplitz of the data dimension"
  double dykstra_tol = 1e-8;
  int dykstra_max_iter = 5000;
  std::uint64_t seed = 0;  // reserved; the ATOM2 path is deterministic
};

struct FitReport {
  HermMat r_hat;
  std::vector<double> objective_trace;  // p(R_t, X_t) per outer iteration
  std::vector<double> neg_ll_trace;
  std::vector<int> inner_iters;      // inner iterations per outer step
  std::vector<double> gamma_trace;   // atom2 only
  double stationarity_residual = 0.0;
  std::string exit_reason;  // "converged" | "max_outer"
  bool converged = false;
  int pd_repairs = 0;
  double wall_time_s = 0.0;
  std::string method;
  StructureSpec spec;
  std::vector<std::string> warnings;
  std::string gamma_log = "natural";  // base used in the gamma schedule
};

/// gamma0 * (t ln t + k1)^2 with the convention 0 ln 0 = 0.
double gamma_schedule(double t, double gamma0, double k1);

/// Quadratic surrogate value Tr(A_t E) + gamma ||E - E_t||_F^2, expanded as
/// Tr(A_t E) + gamma Tr(E^2) - 2 gamma Tr(E E_t) + gamma Tr(E_t^2); tangent
/// to the linear surrogate at E == E_t.
double atom2_surrogate_value(const HermMat& e, const HermMat& e_t, const HermMat& a_t,
                             double gamma);

struct AdmmResult {
  HermMat e;        // block-diagonal, structured lower block exact
  CMat multiplier;  // final Lagrange multiplier
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
};

/// ADMM loop for min Tr(a_t E) over {E block-diag, structured lower block}
/// with E + D - U = 0, U >= 0. Stops when both the primal residual
/// ||E+D-U||_F and the dual residual rho*||U_{k+1}-U_k||_F fall below
/// inner_tol * (r+m).
AdmmResult admm_inner(const HermMat& a_t, const HermMat& d, const HermMat& e0,
                      const HermMat& lambda0, double rho, double inner_tol, int max_inner,
                      const StructureSpec& spec);

/// ATOM1: MM outer loop on the linear surrogate, inner loop via ADMM.
/// Plain Toeplitz structure only.
FitReport atom1(const DataFactor& y, const Atom1Options& opts = {});

/// ATOM2: MM outer loop on the gamma-augmented quadratic surrogate, inner
/// loop via Dykstra's algorithm; supports Toeplitz, banded, BT and TBT.
FitReport atom2(const DataFactor& y, const Atom2Options& opts = {});

/// Relative structure-projected gradient residual
/// ||P(grad f)||_F / ||grad f||_F with grad f = R^{-1} - R^{-1} r_fb R^{-1}.
double stationarity_residual(const HermMat& r_hat, const HermMat& r_fb,
                             const StructureSpec& spec);

}  // namespace atomcov

#endif
