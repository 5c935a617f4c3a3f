#include "atomcov/dykproj.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "atomcov/errors.hpp"

namespace atomcov {

namespace {

void check_inputs(const HermMat& b, const HermMat& d, const StructureSpec& spec) {
  spec.validate();
  if (b.dim() != d.dim()) throw DimensionError("dykstra: B and D size mismatch");
  if (b.dim() < spec.m) throw DimensionError("dykstra: matrix smaller than structured block");
}

double lambda_min_of(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

ProjSolveResult alternating_projections(const HermMat& b, const HermMat& d,
                                        const StructureSpec& spec, double tol, int max_iter,
                                        bool with_corrections, std::vector<ProjTraceRow>* trace) {
  check_inputs(b, d, spec);
  const double scale = 1.0 + b.mat().norm();
  CMat t = b.mat();
  CMat p = CMat::Zero(t.rows(), t.cols());
  CMat q = CMat::Zero(t.rows(), t.cols());

  ProjSolveResult out;
  for (int k = 0; k < max_iter; ++k) {
    const CMat y = detail::proj_dtoep_raw(with_corrections ? (t + p).eval() : t, spec);
    if (with_corrections) p = t + p - y;
    const CMat t_next = detail::proj_lmi_raw(with_corrections ? (y + q).eval() : y, d.mat());
    if (with_corrections) q = y + q - t_next;
    out.last_delta = (t_next - t).norm();
    out.iterations = k + 1;
    t = t_next;
    if (trace != nullptr)
      trace->push_back(ProjTraceRow{k + 1, out.last_delta, lambda_min_of(t + d.mat())});
    if (!all_finite(t)) throw NumericalError("dykstra: non-finite iterate");
    if (out.last_delta <= tol * scale) {
      out.converged = true;
      break;
    }
  }
  // Final structure pass: the returned point is exactly in the structured
  // set and LMI-feasible within the convergence tolerance.
  out.e = HermMat::from_hermitian_part(
      detail::proj_dtoep_raw(with_corrections ? (t + p).eval() : t, spec));
  return out;
}

}  // namespace

ProjSolveResult dykstra(const HermMat& b, const HermMat& d, const StructureSpec& spec, double tol,
                        int max_iter, std::vector<ProjTraceRow>* trace) {
  return alternating_projections(b, d, spec, tol, max_iter, true, trace);
}

ProjSolveResult pocs(const HermMat& b, const HermMat& d, const StructureSpec& spec, double tol,
                     int max_iter, std::vector<ProjTraceRow>* trace) {
  return alternating_projections(b, d, spec, tol, max_iter, false, trace);
}

namespace {

// Real symmetric basis of the free coordinates of E = diag(X, R): a unit
// matrix per upper-triangle entry of X and one per diagonal offset of the
// symmetric Toeplitz (or banded) block R.
std::vector<RMat> oracle_basis(int r, int m, int band) {
  std::vector<RMat> basis;
  const int total = r + m;
  for (int i = 0; i < r; ++i) {
    for (int k = i; k < r; ++k) {
      RMat s = RMat::Zero(total, total);
      s(i, k) = 1.0;
      s(k, i) = 1.0;
      basis.push_back(s);
    }
  }
  for (int off = 0; off <= band; ++off) {
    RMat s = RMat::Zero(total, total);
    for (int i = 0; i + off < m; ++i) {
      s(r + i, r + i + off) = 1.0;
      s(r + i + off, r + i) = 1.0;
    }
    basis.push_back(s);
  }
  return basis;
}

RMat assemble(const std::vector<RMat>& basis, const RVec& v) {
  RMat e = RMat::Zero(basis[0].rows(), basis[0].cols());
  for (size_t j = 0; j < basis.size(); ++j) e += v(static_cast<Eigen::Index>(j)) * basis[j];
  return e;
}

double inner(const RMat& a, const RMat& b) { return (a.array() * b.array()).sum(); }

// Exact nonnegative least squares by active-subset enumeration (few vars).
RVec nnls_enumerate(const RMat& a, const RVec& c) {
  const int q = static_cast<int>(a.cols());
  RVec best = RVec::Zero(q);
  double best_res = (a * best - c).squaredNorm();
  for (int mask = 1; mask < (1 << q); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < q; ++i)
      if (mask & (1 << i)) idx.push_back(i);
    RMat sub(a.rows(), idx.size());
    for (size_t s = 0; s < idx.size(); ++s) sub.col(static_cast<Eigen::Index>(s)) = a.col(idx[s]);
    RVec zs = sub.colPivHouseholderQr().solve(c);
    if ((zs.array() < 0.0).any()) continue;
    RVec z = RVec::Zero(q);
    for (size_t s = 0; s < idx.size(); ++s) z(idx[s]) = zs(static_cast<Eigen::Index>(s));
    const double res = (a * z - c).squaredNorm();
    if (res < best_res) {
      best_res = res;
      best = z;
    }
  }
  return best;
}

}  // namespace

HermMat qp_oracle_small(const HermMat& b, const HermMat& d, const StructureSpec& spec) {
  check_inputs(b, d, spec);
  const int total = static_cast<int>(b.dim());
  const int m = spec.m;
  const int r = total - m;
  if (total > 4) throw DimensionError("qp_oracle_small: dimension too large");
  if (b.mat().imag().cwiseAbs().maxCoeff() > 1e-12 ||
      d.mat().imag().cwiseAbs().maxCoeff() > 1e-12)
    throw DimensionError("qp_oracle_small: complex-valued instance not supported");
  int band = m - 1;
  if (spec.kind == StructKind::kBandedToeplitz)
    band = spec.b;
  else if (spec.kind != StructKind::kToeplitz)
    throw DimensionError("qp_oracle_small: only Toeplitz/banded structured blocks");

  const RMat br = b.mat().real();
  const RMat dr = d.mat().real();
  const std::vector<RMat> basis = oracle_basis(r, m, band);
  const int q = static_cast<int>(basis.size());

  RMat gram(q, q);
  for (int j = 0; j < q; ++j)
    for (int k = 0; k < q; ++k) gram(j, k) = inner(basis[j], basis[k]);

  // Start from the unconstrained subspace minimizer.
  RVec v(q);
  {
    RVec rhs(q);
    for (int j = 0; j < q; ++j) rhs(j) = inner(br, basis[j]);
    v = gram.ldlt().solve(rhs);
  }

  const double scale = 1.0 + br.norm() + dr.norm();
  const auto eig_of = [&](const RVec& vv) {
    Eigen::SelfAdjointEigenSolver<RMat> es(assemble(basis, vv) + dr);
    return es;
  };

  const auto penalty_value = [&](const RVec& vv, double mu) {
    const RMat e = assemble(basis, vv);
    Eigen::SelfAdjointEigenSolver<RMat> es(e + dr, Eigen::EigenvaluesOnly);
    double pen = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      const double neg = std::min(es.eigenvalues()(i), 0.0);
      pen += neg * neg;
    }
    return (e - br).squaredNorm() + mu * pen;
  };

  // Eigenvalue-hinge penalty continuation with damped Newton steps.
  for (double mu = 1e2; mu <= 1e12; mu *= 10.0) {
    for (int it = 0; it < 200; ++it) {
      const RMat e = assemble(basis, v);
      Eigen::SelfAdjointEigenSolver<RMat> es(e + dr);
      RVec grad(q);
      RMat hess = 2.0 * gram;
      for (int j = 0; j < q; ++j) grad(j) = 2.0 * inner(e - br, basis[j]);
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam >= 0.0) continue;
        const RVec u = es.eigenvectors().col(i);
        RVec a(q);
        for (int j = 0; j < q; ++j) a(j) = u.dot(basis[j] * u);
        grad += mu * 2.0 * lam * a;
        hess += mu * 2.0 * a * a.transpose();
      }
      if (grad.norm() <= 1e-12 * scale * std::max(1.0, mu * 1e-6)) break;
      RVec step = hess.ldlt().solve(-grad);
      double alpha = 1.0;
      const double f0 = penalty_value(v, mu);
      const double slope = grad.dot(step);
      while (alpha > 1e-12 && penalty_value(v + alpha * step, mu) > f0 + 1e-4 * alpha * slope)
        alpha *= 0.5;
      v += alpha * step;
      if (alpha * step.norm() <= 1e-14 * scale) break;
    }

    // KKT certificate: fit a PSD multiplier supported on the near-null
    // eigenspace and check stationarity + complementarity + feasibility.
    const RMat e = assemble(basis, v);
    Eigen::SelfAdjointEigenSolver<RMat> es = eig_of(v);
    RVec c(q);
    for (int j = 0; j < q; ++j) c(j) = 2.0 * inner(e - br, basis[j]);
    std::vector<int> active;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) < 1e-5 * scale) active.push_back(static_cast<int>(i));
    double stat_res = c.norm();
    double comp_res = 0.0;
    if (!active.empty()) {
      RMat a(q, active.size());
      for (size_t s = 0; s < active.size(); ++s) {
        const RVec u = es.eigenvectors().col(active[s]);
        for (int j = 0; j < q; ++j) a(j, static_cast<Eigen::Index>(s)) = u.dot(basis[j] * u);
      }
      const RVec z = nnls_enumerate(a, c);
      stat_res = (a * z - c).norm();
      for (size_t s = 0; s < active.size(); ++s)
        comp_res += std::abs(z(static_cast<Eigen::Index>(s)) * es.eigenvalues()(active[s]));
    }
    const double infeas = std::max(0.0, -es.eigenvalues()(0));
    if (stat_res <= 1e-6 * scale && comp_res <= 1e-6 * scale && infeas <= 1e-6 * scale) {
      CMat out = assemble(basis, v).cast<Complex>();
      return HermMat::from_hermitian_part(out);
    }
  }
  throw NumericalError("qp_oracle_small: KKT certificate not reached");
}

}  // namespace atomcov
