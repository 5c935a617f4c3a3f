#include "atomcov/atom.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "atomcov/dykproj.hpp"
#include "atomcov/errors.hpp"
#include "atomcov/hermlin.hpp"

namespace atomcov {

double gamma_schedule(double t, double gamma0, double k1) {
  const double tl = t > 0.0 ? t * std::log(t) : 0.0;  // 0 ln 0 := 0
  const double base = tl + k1;
  return gamma0 * base * base;
}

double atom2_surrogate_value(const HermMat& e, const HermMat& e_t, const HermMat& a_t,
                             double gamma) {
  const double lin = (a_t.mat() * e.mat()).trace().real();
  const double e2 = (e.mat() * e.mat()).trace().real();
  const double cross = (e.mat() * e_t.mat()).trace().real();
  const double et2 = (e_t.mat() * e_t.mat()).trace().real();
  return lin + gamma * e2 - 2.0 * gamma * cross + gamma * et2;
}

namespace {

// Clamp eigenvalues from below; used for the PD init floor and the
// in-iteration PD repair.
CMat clamp_eigenvalues(const CMat& a, double floor_value) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  RVec lam = es.eigenvalues().cwiseMax(floor_value);
  CMat out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint().eval());
}

double lambda_min_of(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double lambda_max_of(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

CMat block_diag(const CMat& x, const CMat& r) {
  CMat e = CMat::Zero(x.rows() + r.rows(), x.cols() + r.cols());
  e.topLeftCorner(x.rows(), x.cols()) = x;
  e.bottomRightCorner(r.rows(), r.cols()) = r;
  return e;
}

CMat data_coupling(const CMat& y) {
  const Eigen::Index m = y.rows(), r = y.cols();
  CMat d = CMat::Zero(r + m, r + m);
  d.topRightCorner(r, m) = y.adjoint();
  d.bottomLeftCorner(m, r) = y;
  return d;
}

// log det of a PD matrix from its eigenvalues; throws when not PD.
double logdet_checked(const CMat& r, const char* who) {
  Eigen::SelfAdjointEigenSolver<CMat> es(r, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) <= 0.0) throw NotPositiveDefinite(std::string(who) + ": R is not PD");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) acc += std::log(es.eigenvalues()(i));
  return acc;
}

struct PdGuard {
  int repairs = 0;
  int consecutive = 0;

  // Returns a PD repaired matrix. Throws after persistent failures.
  CMat apply(CMat r, std::vector<std::string>* warnings, int outer) {
    if (lambda_min_of(r) > 0.0) {
      consecutive = 0;
      return r;
    }
    const double lmax = std::max(lambda_max_of(r), 0.0);
    const double floor_value = lmax > 0.0 ? 1e-10 * lmax : 1e-12;
    r = clamp_eigenvalues(r, floor_value);
    ++repairs;
    ++consecutive;
    if (warnings != nullptr)
      warnings->push_back("eigenvalue floor applied at outer iteration " + std::to_string(outer));
    if (consecutive > 10)
      throw NumericalError("MM iterate lost positive definiteness repeatedly");
    return r;
  }
};

}  // namespace

double stationarity_residual(const HermMat& r_hat, const HermMat& r_fb,
                             const StructureSpec& spec) {
  const HermMat rinv = inverse_pd(r_hat);
  CMat grad = rinv.mat() - rinv.mat() * r_fb.mat() * rinv.mat();
  grad = 0.5 * (grad + grad.adjoint().eval());
  const double denom = grad.norm();
  if (denom <= 1e-14 * (1.0 + rinv.mat().norm())) return 0.0;
  return detail::proj_struct_raw(grad, spec).norm() / denom;
}

AdmmResult admm_inner(const HermMat& a_t, const HermMat& d, const HermMat& e0,
                      const HermMat& lambda0, double rho, double inner_tol, int max_inner,
                      const StructureSpec& spec) {
  if (a_t.dim() != d.dim() || e0.dim() != d.dim() || lambda0.dim() != d.dim())
    throw DimensionError("admm_inner: size mismatch");
  if (rho <= 0.0) throw DimensionError("admm_inner: rho must be positive");
  const double n = static_cast<double>(d.dim());

  CMat e = e0.mat();
  CMat lam = lambda0.mat();
  CMat u_prev;
  AdmmResult out;
  for (int k = 0; k < max_inner; ++k) {
    const CMat u = detail::proj_psd_raw(e + d.mat() + lam / rho);
    e = detail::proj_dtoep_raw(u - d.mat() - (lam + a_t.mat()) / rho, spec);
    lam += rho * (e + d.mat() - u);
    out.primal_residual = (e + d.mat() - u).norm();
    out.dual_residual = k == 0 ? std::numeric_limits<double>::infinity()
                               : rho * (u - u_prev).norm();
    out.iterations = k + 1;
    u_prev = u;
    if (!all_finite(e) || !all_finite(lam))
      throw NumericalError("admm_inner: non-finite iterate");
    if (out.primal_residual <= inner_tol * n && out.dual_residual <= inner_tol * n) {
      out.converged = true;
      break;
    }
  }
  lam = 0.5 * (lam + lam.adjoint().eval());
  out.e = HermMat::from_hermitian_part(e);
  out.multiplier = lam;
  return out;
}

FitReport atom1(const DataFactor& y, const Atom1Options& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  const Eigen::Index m = y.dim();
  const Eigen::Index r = y.rank();
  if (m < 1 || r < 1) throw DimensionError("atom1: empty data factor");
  const StructureSpec spec = StructureSpec::toeplitz(static_cast<int>(m));

  FitReport rep;
  rep.method = "atom1";
  rep.spec = spec;

  const CMat yyh = y.y * y.y.adjoint();
  const CMat r_fb = 0.5 * (yyh + yyh.adjoint().eval());
  const HermMat r_fb_h = HermMat::from_hermitian_part(r_fb);

  // Init: structure projection of the FB estimate, eigenvalue-floored.
  const double init_floor = 1e-8 * r_fb.trace().real() / static_cast<double>(m);
  CMat r_cur = clamp_eigenvalues(detail::proj_toeplitz_herm_raw(r_fb), init_floor);
  CMat r_inv = solve_pd(HermMat::from_hermitian_part(r_cur), CMat::Identity(m, m));
  CMat x_cur = y.y.adjoint() * r_inv * y.y;
  x_cur = 0.5 * (x_cur + x_cur.adjoint().eval());

  // Initial multiplier V V^H with uniform [0,1] entries.
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RMat v(r + m, r + m);
  for (Eigen::Index k = 0; k < v.cols(); ++k)
    for (Eigen::Index i = 0; i < v.rows(); ++i) v(i, k) = unif(rng);
  CMat lam = (v * v.transpose()).cast<Complex>();

  const CMat d = data_coupling(y.y);
  CMat e = block_diag(x_cur, r_cur);

  double p_cur = x_cur.trace().real() + logdet_checked(r_cur, "atom1");
  rep.objective_trace.push_back(p_cur);
  rep.neg_ll_trace.push_back((r_fb * r_inv).trace().real() + logdet_checked(r_cur, "atom1"));

  PdGuard guard;
  rep.exit_reason = "max_outer";
  for (int t = 0; t < opts.max_outer; ++t) {
    const CMat a_t = block_diag(CMat::Identity(r, r), r_inv);
    AdmmResult inner = admm_inner(HermMat::from_hermitian_part(a_t),
                                  HermMat::from_hermitian_part(d), HermMat::from_hermitian_part(e),
                                  HermMat::from_hermitian_part(lam), opts.rho, opts.inner_tol,
                                  opts.max_inner, spec);
    if (!inner.converged)
      rep.warnings.push_back("ADMM hit max_inner at outer iteration " + std::to_string(t));

    CMat x_next = inner.e.mat().topLeftCorner(r, r);
    CMat r_next = guard.apply(inner.e.mat().bottomRightCorner(m, m), &rep.warnings, t);
    rep.pd_repairs = guard.repairs;

    const double p_next = x_next.trace().real() + logdet_checked(r_next, "atom1");
    if (p_next > p_cur) {
      // Inner accuracy exhausted: the surrogate optimum no longer improves
      // the objective, so the current iterate is kept.
      rep.warnings.push_back("final step rejected (objective increase within inner accuracy)");
      rep.exit_reason = "converged";
      rep.converged = true;
      break;
    }

    x_cur = x_next;
    r_cur = r_next;
    r_inv = solve_pd(HermMat::from_hermitian_part(r_cur), CMat::Identity(m, m));
    e = block_diag(x_cur, r_cur);
    lam = inner.multiplier;

    rep.inner_iters.push_back(inner.iterations);
    rep.objective_trace.push_back(p_next);
    rep.neg_ll_trace.push_back((r_fb * r_inv).trace().real() + logdet_checked(r_cur, "atom1"));

    const double progress = p_cur - p_next;
    p_cur = p_next;
    if (progress <= opts.outer_tol) {
      rep.exit_reason = "converged";
      rep.converged = true;
      break;
    }
  }

  rep.r_hat = HermMat::from_hermitian_part(r_cur);
  rep.stationarity_residual = stationarity_residual(rep.r_hat, r_fb_h, spec);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

FitReport atom2(const DataFactor& y, const Atom2Options& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  const Eigen::Index m = y.dim();
  const Eigen::Index r = y.rank();
  if (m < 1 || r < 1) throw DimensionError("atom2: empty data factor");
  StructureSpec spec = opts.spec;
  if (spec.m == 0) spec = StructureSpec::toeplitz(static_cast<int>(m));
  spec.validate();
  if (spec.m != m) throw DimensionError("atom2: spec dimension does not match data");
  if (opts.gamma0 <= 0.0) throw DimensionError("atom2: gamma0 must be positive");

  FitReport rep;
  rep.method = "atom2";
  rep.spec = spec;

  const CMat yyh = y.y * y.y.adjoint();
  const CMat r_fb = 0.5 * (yyh + yyh.adjoint().eval());
  const HermMat r_fb_h = HermMat::from_hermitian_part(r_fb);
  const CMat d = data_coupling(y.y);
  const HermMat d_h = HermMat::from_hermitian_part(d);

  const double init_floor = 1e-8 * r_fb.trace().real() / static_cast<double>(m);
  CMat r_cur = clamp_eigenvalues(detail::proj_struct_raw(r_fb, spec), init_floor);

  PdGuard guard;
  rep.exit_reason = "max_outer";
  double p_cur = 0.0;
  bool have_p = false;
  for (int t = 0; t < opts.max_outer; ++t) {
    const CMat r_inv = solve_pd(HermMat::from_hermitian_part(r_cur), CMat::Identity(m, m));
    CMat x_t = y.y.adjoint() * r_inv * y.y;  // surrogate anchor X_t
    x_t = 0.5 * (x_t + x_t.adjoint().eval());
    if (!have_p) {
      p_cur = x_t.trace().real() + logdet_checked(r_cur, "atom2");
      rep.objective_trace.push_back(p_cur);
      rep.neg_ll_trace.push_back(p_cur);  // Tr(X_t) == Tr(R_FB R_t^{-1})
      have_p = true;
    }

    const double gamma = gamma_schedule(static_cast<double>(t), opts.gamma0, opts.k1);
    rep.gamma_trace.push_back(gamma);
    const CMat a_t = block_diag(CMat::Identity(r, r), r_inv);
    const CMat e_t = block_diag(x_t, r_cur);
    const CMat b_t = e_t - (0.5 / gamma) * a_t;

    ProjSolveResult sol = dykstra(HermMat::from_hermitian_part(b_t), d_h, spec,
                                  opts.dykstra_tol, opts.dykstra_max_iter);
    if (!sol.converged)
      rep.warnings.push_back("Dykstra hit max_iter at outer iteration " + std::to_string(t));
    rep.inner_iters.push_back(sol.iterations);

    CMat r_next = guard.apply(sol.e.mat().bottomRightCorner(m, m), &rep.warnings, t);
    rep.pd_repairs = guard.repairs;

    const CMat rn_inv = solve_pd(HermMat::from_hermitian_part(r_next), CMat::Identity(m, m));
    const double p_next = (r_fb * rn_inv).trace().real() + logdet_checked(r_next, "atom2");
    if (p_next > p_cur) {
      rep.inner_iters.pop_back();
      rep.gamma_trace.pop_back();
      rep.warnings.push_back("final step rejected (objective increase within inner accuracy)");
      rep.exit_reason = "converged";
      rep.converged = true;
      break;
    }

    r_cur = r_next;
    rep.objective_trace.push_back(p_next);
    rep.neg_ll_trace.push_back(p_next);
    const double progress = p_cur - p_next;
    p_cur = p_next;
    if (progress <= opts.outer_tol) {
      rep.exit_reason = "converged";
      rep.converged = true;
      break;
    }
  }

  rep.r_hat = HermMat::from_hermitian_part(r_cur);
  rep.stationarity_residual = stationarity_residual(rep.r_hat, r_fb_h, spec);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

}  // namespace atomcov
