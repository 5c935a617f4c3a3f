#include "atomcov/hermmat.hpp"

#include <cmath>

#include "atomcov/errors.hpp"

namespace atomcov {

bool all_finite(const CMat& a) {
  for (Eigen::Index k = 0; k < a.cols(); ++k)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, k).real()) || !std::isfinite(a(i, k).imag())) return false;
  return true;
}

HermMat::HermMat(const CMat& a) {
  if (a.rows() != a.cols()) throw DimensionError("HermMat: matrix is not square");
  if (!all_finite(a)) throw NumericalError("HermMat: non-finite entries");
  const double scale = a.cwiseAbs().maxCoeff();
  const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12 * (1.0 + scale))
    throw DimensionError("HermMat: matrix is not Hermitian within tolerance");
  mat_ = 0.5 * (a + a.adjoint().eval());
}

HermMat HermMat::from_hermitian_part(const CMat& a) {
  if (a.rows() != a.cols()) throw DimensionError("HermMat: matrix is not square");
  if (!all_finite(a)) throw NumericalError("HermMat: non-finite entries");
  return HermMat(0.5 * (a + a.adjoint().eval()), unchecked_t{});
}

HermMat HermMat::identity(Eigen::Index m) {
  return HermMat(CMat::Identity(m, m), unchecked_t{});
}

HermMat HermMat::zero(Eigen::Index m) { return HermMat(CMat::Zero(m, m), unchecked_t{}); }

void SnapshotSet::validate() const {
  if (data.cols() < 1) throw DimensionError("SnapshotSet: need at least one snapshot");
  if (data.rows() < 1) throw DimensionError("SnapshotSet: dimension must be positive");
  if (!all_finite(data)) throw NumericalError("SnapshotSet: non-finite entries");
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

}  // namespace atomcov
