#ifndef ATOMCOV_STRUCTSETS_HPP
#define ATOMCOV_STRUCTSETS_HPP

#include <string>

#include "atomcov/hermmat.hpp"

namespace atomcov {

enum class StructKind { kToeplitz, kBandedToeplitz, kBlockToeplitz, kTbt };

/// Tagged description of a Toeplitz-family constraint set.
struct StructureSpec {
  StructKind kind = StructKind::kToeplitz;
  int m = 0;  // matrix dimension
  int b = 0;  // bandwidth, banded kind only (0 <= b <= m-1)
  int p = 0;  // block count, block kinds only (p * l == m)
  int l = 0;  // block size, block kinds only

  static StructureSpec toeplitz(int m);
  static StructureSpec banded(int m, int b);
  static StructureSpec block_toeplitz(int p, int l);
  static StructureSpec tbt(int p, int l);

  void validate() const;

  /// Length of the real parameter vector; throws for BlockToeplitz, which
  /// has no parameterization here.
  int theta_len() const;

  /// Short tag: "toeplitz" | "banded" | "bt" | "tbt".
  std::string kind_name() const;

  bool operator==(const StructureSpec&) const = default;
};

/// Real parameter vector of a structured covariance.
struct ThetaVec {
  StructureSpec spec;
  RVec values;
};

/// Hermitian Toeplitz matrix from theta = [r1, Re r2..Re rm, Im r2..Im rm].
HermMat toeplitz_from_theta(const ThetaVec& t);

/// Structured matrix from theta for Toeplitz, banded Toeplitz and TBT specs.
HermMat struct_from_theta(const ThetaVec& t);

/// Inverse of struct_from_theta. Requires R to lie in the set described by
/// spec within 1e-10 relative; throws otherwise.
ThetaVec theta_from_struct(const HermMat& r, const StructureSpec& spec);

/// Orthogonal projection onto Hermitian Toeplitz matrices (diagonal means).
HermMat proj_toeplitz_herm(const HermMat& a);

/// Diagonal-averaging projection onto general (non-Hermitian) Toeplitz
/// matrices; every one of the 2l-1 diagonals becomes constant.
CMat proj_toeplitz_general(const CMat& a);

/// Projection onto Hermitian banded Toeplitz matrices of bandwidth b.
HermMat proj_banded(const HermMat& a, int b);

/// Projection onto Hermitian block-Toeplitz matrices with p blocks of size l.
HermMat proj_bt(const HermMat& a, int p, int l);

/// Projection onto Hermitian Toeplitz-block-Toeplitz matrices.
HermMat proj_tbt(const HermMat& a, int p, int l);

/// Projection onto the structure set named by spec.
HermMat proj_struct(const HermMat& a, const StructureSpec& spec);

/// Projection onto the PSD cone: V max(lambda, 0) V^H.
HermMat proj_psd(const HermMat& a);

/// Projection onto block-diagonal matrices diag(X, R) of size (r+m) whose
/// lower m x m block lies in the structure set of spec. The upper block of
/// psi is kept (Hermitian part), off-diagonal blocks are zeroed.
HermMat proj_dtoep(const HermMat& psi, const StructureSpec& spec);

/// Projection onto { E : E + D >= 0 }: proj_psd(psi + d) - d.
HermMat proj_lmi(const HermMat& psi, const HermMat& d);

namespace detail {
// Raw-matrix versions used in solver inner loops; inputs are assumed
// Hermitian, outputs are Hermitian by construction.
CMat proj_toeplitz_herm_raw(const CMat& a);
CMat proj_banded_raw(const CMat& a, int b);
CMat proj_bt_raw(const CMat& a, int p, int l);
CMat proj_tbt_raw(const CMat& a, int p, int l);
CMat proj_struct_raw(const CMat& a, const StructureSpec& spec);
CMat proj_psd_raw(const CMat& a);
CMat proj_dtoep_raw(const CMat& psi, const StructureSpec& spec);
CMat proj_lmi_raw(const CMat& psi, const CMat& d);
}  // namespace detail

}  // namespace atomcov

#endif
