#ifndef ATOMCOV_HERMMAT_HPP
#define ATOMCOV_HERMMAT_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <utility>

namespace atomcov {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Dense complex Hermitian matrix. Construction enforces the invariant
/// A == A^H (to 1e-12 relative, entrywise) and stores the exact Hermitian
/// part, so downstream identities hold in exact arithmetic.
class HermMat {
 public:
  HermMat() = default;

  /// Validates squareness, finiteness and hermiticity, then symmetrizes.
  explicit HermMat(const CMat& a);

  /// Stores (a + a^H)/2 without a hermiticity tolerance check. Intended for
  /// results that are Hermitian by construction up to roundoff.
  static HermMat from_hermitian_part(const CMat& a);

  static HermMat identity(Eigen::Index m);
  static HermMat zero(Eigen::Index m);

  Eigen::Index dim() const { return mat_.rows(); }
  const CMat& mat() const { return mat_; }

 private:
  struct unchecked_t {};
  HermMat(CMat m, unchecked_t) : mat_(std::move(m)) {}
  CMat mat_;
};

/// n complex snapshots of dimension m, column-stacked. `seed` records the
/// generator seed, or nullopt for externally produced data.
struct SnapshotSet {
  CMat data;  // m x n
  std::optional<std::uint64_t> seed;

  Eigen::Index dim() const { return data.rows(); }
  Eigen::Index count() const { return data.cols(); }
  void validate() const;
};

/// Low-rank factor Y with Y Y^H reproducing the matrix it was cut from.
struct DataFactor {
  CMat y;      // m x r, columns ordered by descending eigenvalue
  double tol;  // relative rank cut used

  Eigen::Index dim() const { return y.rows(); }
  Eigen::Index rank() const { return y.cols(); }
};

/// (X, R) block pair defining E = diag(X, R).
struct BlockPair {
  HermMat x;
  HermMat r;
};

/// Kronecker product (block (i,k) of the result is a(i,k) * b).
CMat kron(const CMat& a, const CMat& b);

/// True when every entry is finite.
bool all_finite(const CMat& a);

}  // namespace atomcov

#endif
