#ifndef ATOMCOV_CRB_HPP
#define ATOMCOV_CRB_HPP

#include <string>
#include <vector>

#include "atomcov/hermmat.hpp"
#include "atomcov/structsets.hpp"

namespace atomcov {

/// Ordered derivative matrices dR/dtheta_i of a structured parameterization.
struct BasisSet {
  StructureSpec spec;
  std::vector<CMat> derivs;  // each Hermitian, one per theta coordinate
};

/// Toeplitz basis matrix (1-based g): (1+j) on the diagonal for g == 1,
/// (1+j) on superdiagonal g-1 and (1-j) on subdiagonal g-1 for g >= 2.
CMat basis_toeplitz(int g, int m);

/// 2m-1 derivative matrices of the Hermitian Toeplitz parameterization.
BasisSet derivs_toeplitz(int m);

/// 2b+1 derivative matrices of the banded Toeplitz parameterization.
BasisSet derivs_banded(int m, int b);

/// 2l-1 + (p-1)(4l-2) derivative matrices of the TBT parameterization.
BasisSet derivs_tbt(int p, int l);

/// Derivative set for any parameterized spec (dispatch on kind).
BasisSet derivs_for(const StructureSpec& spec);

/// Fisher information matrix F_ik = n Tr(R^{-1} dR_i R^{-1} dR_k).
RMat fim(const HermMat& r, const BasisSet& basis, int n);

struct CrbResult {
  double crb = 0.0;        // trace(F^{-1})
  double condition = 0.0;  // eigenvalue-based condition number of F
  std::vector<std::string> warnings;
};

/// trace(F^{-1}); falls back to a pseudo-inverse with a warning when the
/// condition number exceeds 1e12.
CrbResult crb_trace(const RMat& f);

}  // namespace atomcov

#endif
