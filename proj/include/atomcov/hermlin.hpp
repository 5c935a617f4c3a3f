#ifndef ATOMCOV_HERMLIN_HPP
#define ATOMCOV_HERMLIN_HPP

#include <utility>

#include "atomcov/hermmat.hpp"

namespace atomcov {

/// Sample covariance (1/n) sum_k y_k y_k^H.
HermMat scm(const SnapshotSet& samples);

/// Forward-backward average (S + J S* J)/2 with J the exchange matrix.
/// The result is Hermitian and persymmetric exactly by construction.
HermMat fb_average(const HermMat& s);

/// Factor r_fb = Y Y^H by eigendecomposition, keeping eigenvalues above
/// tol * lambda_max and ordering columns by descending eigenvalue.
/// Throws NotPsd when an eigenvalue falls below -tol * lambda_max.
DataFactor factor_data(const HermMat& r_fb, double tol = 1e-10);

/// trace(r_fb R^{-1}) + log|R|. Throws NotPositiveDefinite unless R > 0.
double neg_log_likelihood(const HermMat& r, const HermMat& r_fb);

/// trace(X) + log|R| for E = diag(X, R).
double surrogate_objective(const BlockPair& p);

/// Hermitian PSD square root: W with W W = R.
HermMat sqrt_psd(const HermMat& r);

struct Evd {
  RVec eigenvalues;   // ascending
  CMat eigenvectors;  // orthonormal columns, aligned with eigenvalues
};

/// Eigendecomposition of a Hermitian matrix.
Evd evd(const HermMat& h);

/// log det R as the sum of log eigenvalues; throws NotPositiveDefinite
/// when lambda_min <= 0.
double log_det_pd(const HermMat& r);

/// Solve R X = B for Hermitian positive definite R.
CMat solve_pd(const HermMat& r, const CMat& b);

/// Inverse of a Hermitian positive definite matrix (Hermitian result).
HermMat inverse_pd(const HermMat& r);

}  // namespace atomcov

#endif
