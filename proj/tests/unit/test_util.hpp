#ifndef ATOMCOV_TEST_UTIL_HPP
#define ATOMCOV_TEST_UTIL_HPP

#include <random>
#include <vector>

#include "atomcov/hermmat.hpp"
#include "atomcov/structsets.hpp"

namespace testutil {

using atomcov::CMat;
using atomcov::Complex;
using atomcov::HermMat;
using atomcov::RMat;
using atomcov::RVec;

inline CMat random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat a(rows, cols);
  for (int k = 0; k < cols; ++k)
    for (int i = 0; i < rows; ++i) a(i, k) = Complex(normal(rng), normal(rng));
  return a;
}

inline HermMat random_hermitian(int m, std::mt19937_64& rng) {
  CMat a = random_complex(m, m, rng);
  return HermMat::from_hermitian_part(a);
}

inline HermMat random_psd(int m, std::mt19937_64& rng, double ridge = 0.0) {
  CMat a = random_complex(m, m, rng);
  CMat p = a * a.adjoint() / static_cast<double>(m);
  p += ridge * CMat::Identity(m, m);
  return HermMat::from_hermitian_part(p);
}

inline double frob(const CMat& a) { return a.norm(); }

// Real Frobenius inner product of Hermitian matrices.
inline double herm_inner(const CMat& a, const CMat& b) {
  return (a.adjoint() * b).trace().real();
}

// Real-linear basis of the Hermitian matrices of size m built from
// elementary symmetric/antisymmetric pairs. Used by least-squares oracles.
inline std::vector<CMat> hermitian_basis(int m) {
  std::vector<CMat> basis;
  for (int i = 0; i < m; ++i) {
    CMat e = CMat::Zero(m, m);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (int i = 0; i < m; ++i) {
    for (int k = i + 1; k < m; ++k) {
      CMat e = CMat::Zero(m, m);
      e(i, k) = 1.0;
      e(k, i) = 1.0;
      basis.push_back(e);
      CMat f = CMat::Zero(m, m);
      f(i, k) = Complex(0.0, 1.0);
      f(k, i) = Complex(0.0, -1.0);
      basis.push_back(f);
    }
  }
  return basis;
}

// Hermitian Toeplitz subspace basis (2m-1 real dimensions), one element per
// diagonal offset and real/imag component. Built with raw loops so oracles
// stay independent of the library parameterizations.
inline std::vector<CMat> herm_toeplitz_basis(int m, int band = -1) {
  if (band < 0) band = m - 1;
  std::vector<CMat> basis;
  {
    CMat e = CMat::Identity(m, m);
    basis.push_back(e);
  }
  for (int d = 1; d <= band; ++d) {
    CMat re = CMat::Zero(m, m), im = CMat::Zero(m, m);
    for (int i = 0; i + d < m; ++i) {
      re(i, i + d) = 1.0;
      re(i + d, i) = 1.0;
      im(i, i + d) = Complex(0.0, 1.0);
      im(i + d, i) = Complex(0.0, -1.0);
    }
    basis.push_back(re);
    basis.push_back(im);
  }
  return basis;
}

// General (non-Hermitian) Toeplitz basis of l x l complex matrices viewed as
// a real vector space: 2*(2l-1) elements.
inline std::vector<CMat> general_toeplitz_basis(int l) {
  std::vector<CMat> basis;
  for (int d = -(l - 1); d <= l - 1; ++d) {
    CMat re = CMat::Zero(l, l), im = CMat::Zero(l, l);
    for (int i = 0; i < l; ++i) {
      const int k = i + d;
      if (k < 0 || k >= l) continue;
      re(i, k) = 1.0;
      im(i, k) = Complex(0.0, 1.0);
    }
    basis.push_back(re);
    basis.push_back(im);
  }
  return basis;
}

// Hermitian block-Toeplitz subspace basis for p blocks of size l; when
// toeplitz_blocks is true the blocks themselves are Toeplitz (TBT).
inline std::vector<CMat> bt_subspace_basis(int p, int l, bool toeplitz_blocks) {
  std::vector<CMat> basis;
  const int m = p * l;
  auto lift0 = [&](const CMat& s) {
    CMat e = CMat::Zero(m, m);
    for (int i = 0; i < p; ++i) e.block(i * l, i * l, l, l) = s;
    return e;
  };
  auto liftw = [&](int w, const CMat& t) {
    CMat e = CMat::Zero(m, m);
    for (int i = 0; i + w < p; ++i) {
      e.block(i * l, (i + w) * l, l, l) = t;
      e.block((i + w) * l, i * l, l, l) = t.adjoint();
    }
    return e;
  };
  const auto diag_basis = toeplitz_blocks ? herm_toeplitz_basis(l) : hermitian_basis(l);
  for (const auto& s : diag_basis) basis.push_back(lift0(s));
  std::vector<CMat> off_basis;
  if (toeplitz_blocks) {
    off_basis = general_toeplitz_basis(l);
  } else {
    for (int i = 0; i < l; ++i)
      for (int k = 0; k < l; ++k) {
        CMat re = CMat::Zero(l, l), im = CMat::Zero(l, l);
        re(i, k) = 1.0;
        im(i, k) = Complex(0.0, 1.0);
        off_basis.push_back(re);
        off_basis.push_back(im);
      }
  }
  for (int w = 1; w < p; ++w)
    for (const auto& t : off_basis) basis.push_back(liftw(w, t));
  return basis;
}

// Least-squares projection of a Hermitian matrix onto span(basis) via the
// normal equations; the independent oracle for the subspace projections.
inline CMat least_squares_projection(const CMat& a, const std::vector<CMat>& basis) {
  const int q = static_cast<int>(basis.size());
  RMat gram(q, q);
  RVec rhs(q);
  for (int i = 0; i < q; ++i) {
    rhs(i) = herm_inner(basis[i], a);
    for (int k = 0; k < q; ++k) gram(i, k) = herm_inner(basis[i], basis[k]);
  }
  const RVec c = gram.ldlt().solve(rhs);
  CMat out = CMat::Zero(a.rows(), a.cols());
  for (int i = 0; i < q; ++i) out += c(i) * basis[i];
  return out;
}

}  // namespace testutil

#endif
