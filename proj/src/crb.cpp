#include "atomcov/crb.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <vector>

#include "atomcov/errors.hpp"
#include "atomcov/hermlin.hpp"

namespace atomcov {

CMat basis_toeplitz(int g, int m) {
  if (g < 1 || g > m) throw DimensionError("basis_toeplitz: g out of range");
  CMat b = CMat::Zero(m, m);
  const Complex upper(1.0, 1.0), lower(1.0, -1.0);
  if (g == 1) {
    b.diagonal().setConstant(upper);
    return b;
  }
  for (int i = 0; i + g - 1 < m; ++i) {
    b(i, i + g - 1) = upper;
    b(i + g - 1, i) = lower;
  }
  return b;
}

BasisSet derivs_toeplitz(int m) {
  BasisSet out;
  out.spec = StructureSpec::toeplitz(m);
  out.derivs.reserve(2 * m - 1);
  for (int g = 1; g <= m; ++g) out.derivs.push_back(basis_toeplitz(g, m).real().cast<Complex>());
  for (int g = m + 1; g <= 2 * m - 1; ++g)
    out.derivs.push_back(Complex(0.0, 1.0) *
                         basis_toeplitz(g - m + 1, m).imag().cast<Complex>());
  return out;
}

BasisSet derivs_banded(int m, int b) {
  BasisSet out;
  out.spec = StructureSpec::banded(m, b);
  out.derivs.reserve(2 * b + 1);
  for (int g = 1; g <= b + 1; ++g) out.derivs.push_back(basis_toeplitz(g, m).real().cast<Complex>());
  for (int g = b + 2; g <= 2 * b + 1; ++g)
    out.derivs.push_back(Complex(0.0, 1.0) * basis_toeplitz(g - b, m).imag().cast<Complex>());
  return out;
}

namespace {

// Block-shift matrix: ones where i - k == w.
RMat shift_matrix(int p, int w) {
  RMat c = RMat::Zero(p, p);
  for (int i = w; i < p; ++i) c(i, i - w) = 1.0;
  return c;
}

// D_g = B_g for g = 1, (1/2)(B_g^T + j B_g^T) elsewhere.
CMat d_basis(int g, int l) {
  const CMat b = basis_toeplitz(g, l);
  if (g == 1) return b;
  return 0.5 * (b.transpose() + Complex(0.0, 1.0) * b.transpose()).eval();
}

}  // namespace

BasisSet derivs_tbt(int p, int l) {
  BasisSet out;
  out.spec = StructureSpec::tbt(p, l);
  out.derivs.reserve(2 * l - 1 + (p - 1) * (4 * l - 2));
  const CMat c0 = CMat::Identity(p, p);

  // w = 0: Hermitian Toeplitz diagonal block.
  for (int g = 1; g <= l; ++g)
    out.derivs.push_back(kron(c0, basis_toeplitz(g, l).real().cast<Complex>()));
  for (int g = l + 1; g <= 2 * l - 1; ++g)
    out.derivs.push_back(
        kron(c0, Complex(0.0, 1.0) * basis_toeplitz(g - l + 1, l).imag().cast<Complex>()));

  const Complex j(0.0, 1.0);
  for (int w = 1; w < p; ++w) {
    const CMat cw = shift_matrix(p, w).cast<Complex>();
    const CMat cwt = cw.transpose();
    for (int g = 1; g <= l; ++g) {
      const CMat re_d = d_basis(g, l).real().cast<Complex>();
      out.derivs.push_back(kron(cw, re_d.transpose()) + kron(cwt, re_d));
    }
    for (int g = l + 1; g <= 2 * l; ++g) {
      const CMat re_d = d_basis(g - l, l).real().cast<Complex>();
      out.derivs.push_back(kron(cw, (-j) * re_d.transpose()) + kron(cwt, j * re_d));
    }
    for (int g = 2 * l + 1; g <= 3 * l - 1; ++g) {
      const CMat im_d = d_basis(g - 2 * l + 1, l).imag().cast<Complex>();
      out.derivs.push_back(kron(cw, im_d.transpose()) + kron(cwt, im_d));
    }
    for (int g = 3 * l; g <= 4 * l - 2; ++g) {
      const CMat im_d = d_basis(g - 3 * l + 2, l).imag().cast<Complex>();
      out.derivs.push_back(kron(cw, (-j) * im_d.transpose()) + kron(cwt, j * im_d));
    }
  }
  return out;
}

BasisSet derivs_for(const StructureSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case StructKind::kToeplitz:
      return derivs_toeplitz(spec.m);
    case StructKind::kBandedToeplitz:
      return derivs_banded(spec.m, spec.b);
    case StructKind::kTbt:
      return derivs_tbt(spec.p, spec.l);
    case StructKind::kBlockToeplitz:
      throw DimensionError("derivs_for: no derivative table for block-Toeplitz");
  }
  throw DimensionError("derivs_for: unknown kind");
}

RMat fim(const HermMat& r, const BasisSet& basis, int n) {
  if (n < 1) throw DimensionError("fim: sample count must be positive");
  const int q = static_cast<int>(basis.derivs.size());
  if (q != basis.spec.theta_len()) throw DimensionError("fim: basis size mismatch");
  for (const CMat& d : basis.derivs)
    if (d.rows() != r.dim()) throw DimensionError("fim: derivative size mismatch");

  std::vector<CMat> scaled(q);  // R^{-1} dR_i
  for (int i = 0; i < q; ++i) scaled[i] = solve_pd(r, basis.derivs[i]);
  RMat f(q, q);
  for (int i = 0; i < q; ++i) {
    for (int k = i; k < q; ++k) {
      const double v = static_cast<double>(n) *
                       (scaled[i] * scaled[k]).trace().real();
      f(i, k) = v;
      f(k, i) = v;
    }
  }
  return f;
}

CrbResult crb_trace(const RMat& f) {
  CrbResult out;
  Eigen::SelfAdjointEigenSolver<RMat> es(f);
  const RVec& lam = es.eigenvalues();
  const double lmax = lam(lam.size() - 1);
  const double lmin = lam(0);
  if (lmax <= 0.0) throw NumericalError("crb_trace: FIM is not positive definite");
  out.condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (out.condition > 1e12) {
    out.warnings.push_back("ill-conditioned FIM; pseudo-inverse used");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      if (lam(i) > 1e-12 * lmax) acc += 1.0 / lam(i);
    out.crb = acc;
  } else {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) acc += 1.0 / lam(i);
    out.crb = acc;
  }
  return out;
}

}  // namespace atomcov
