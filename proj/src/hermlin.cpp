#include "atomcov/hermlin.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "atomcov/errors.hpp"

namespace atomcov {

HermMat scm(const SnapshotSet& samples) {
  samples.validate();
  const double n = static_cast<double>(samples.count());
  CMat s = (samples.data * samples.data.adjoint()) / n;
  return HermMat::from_hermitian_part(s);
}

HermMat fb_average(const HermMat& s) {
  // (J S* J)(i,k) = conj(S(m-1-i, m-1-k)): reverse both index orders.
  CMat flipped = s.mat().reverse().conjugate();
  return HermMat::from_hermitian_part(0.5 * (s.mat() + flipped));
}

DataFactor factor_data(const HermMat& r_fb, double tol) {
  Eigen::SelfAdjointEigenSolver<CMat> es(r_fb.mat());
  const RVec& lam = es.eigenvalues();  // ascending
  const double lam_max = std::max(lam(lam.size() - 1), 0.0);
  if (lam(0) < -tol * std::max(lam_max, 1.0))
    throw NotPsd("factor_data: matrix is not PSD within tolerance");
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam(i) > tol * lam_max) ++r;
  if (r == 0) r = 1;  // zero matrix degenerates to a single null column
  CMat y(r_fb.dim(), r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const Eigen::Index src = lam.size() - 1 - k;  // descending order
    y.col(k) = es.eigenvectors().col(src) * std::sqrt(std::max(lam(src), 0.0));
  }
  return DataFactor{std::move(y), tol};
}

double log_det_pd(const HermMat& r) {
  Eigen::SelfAdjointEigenSolver<CMat> es(r.mat(), Eigen::EigenvaluesOnly);
  const RVec& lam = es.eigenvalues();
  if (lam(0) <= 0.0) throw NotPositiveDefinite("log_det_pd: matrix is not PD");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) acc += std::log(lam(i));
  return acc;
}

CMat solve_pd(const HermMat& r, const CMat& b) {
  Eigen::LLT<CMat> llt(r.mat());
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("solve_pd: Cholesky factorization failed");
  return llt.solve(b);
}

HermMat inverse_pd(const HermMat& r) {
  return HermMat::from_hermitian_part(solve_pd(r, CMat::Identity(r.dim(), r.dim())));
}

double neg_log_likelihood(const HermMat& r, const HermMat& r_fb) {
  if (r.dim() != r_fb.dim()) throw DimensionError("neg_log_likelihood: dimension mismatch");
  const double ld = log_det_pd(r);  // also certifies positive definiteness
  const CMat x = solve_pd(r, r_fb.mat());
  return x.trace().real() + ld;
}

double surrogate_objective(const BlockPair& p) {
  return p.x.mat().trace().real() + log_det_pd(p.r);
}

HermMat sqrt_psd(const HermMat& r) {
  Eigen::SelfAdjointEigenSolver<CMat> es(r.mat());
  const RVec& lam = es.eigenvalues();
  const double lam_max = std::max(lam(lam.size() - 1), 0.0);
  if (lam(0) < -1e-10 * std::max(lam_max, 1.0))
    throw NotPsd("sqrt_psd: negative eigenvalue beyond tolerance");
  RVec s = lam.cwiseMax(0.0).cwiseSqrt();
  CMat w = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
  return HermMat::from_hermitian_part(w);
}

Evd evd(const HermMat& h) {
  if (!all_finite(h.mat())) throw NumericalError("evd: non-finite input");
  Eigen::SelfAdjointEigenSolver<CMat> es(h.mat());
  return Evd{es.eigenvalues(), es.eigenvectors()};
}

}  // namespace atomcov
