#include "atomcov/structsets.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "atomcov/errors.hpp"

namespace atomcov {

StructureSpec StructureSpec::toeplitz(int m) {
  StructureSpec s{StructKind::kToeplitz, m, 0, 0, 0};
  s.validate();
  return s;
}

StructureSpec StructureSpec::banded(int m, int b) {
  StructureSpec s{StructKind::kBandedToeplitz, m, b, 0, 0};
  s.validate();
  return s;
}

StructureSpec StructureSpec::block_toeplitz(int p, int l) {
  StructureSpec s{StructKind::kBlockToeplitz, p * l, 0, p, l};
  s.validate();
  return s;
}

StructureSpec StructureSpec::tbt(int p, int l) {
  StructureSpec s{StructKind::kTbt, p * l, 0, p, l};
  s.validate();
  return s;
}

void StructureSpec::validate() const {
  if (m < 1) throw DimensionError("StructureSpec: m must be positive");
  switch (kind) {
    case StructKind::kToeplitz:
      break;
    case StructKind::kBandedToeplitz:
      if (b < 0 || b > m - 1) throw DimensionError("StructureSpec: bandwidth out of range");
      break;
    case StructKind::kBlockToeplitz:
    case StructKind::kTbt:
      if (p < 1 || l < 1 || p * l != m)
        throw DimensionError("StructureSpec: block layout requires p*l == m");
      break;
  }
}

int StructureSpec::theta_len() const {
  switch (kind) {
    case StructKind::kToeplitz:
      return 2 * m - 1;
    case StructKind::kBandedToeplitz:
      return 2 * b + 1;
    case StructKind::kTbt:
      return 2 * l - 1 + (p - 1) * (4 * l - 2);
    case StructKind::kBlockToeplitz:
      throw DimensionError("StructureSpec: block-Toeplitz has no theta parameterization");
  }
  throw DimensionError("StructureSpec: unknown kind");
}

std::string StructureSpec::kind_name() const {
  switch (kind) {
    case StructKind::kToeplitz:
      return "toeplitz";
    case StructKind::kBandedToeplitz:
      return "banded";
    case StructKind::kBlockToeplitz:
      return "bt";
    case StructKind::kTbt:
      return "tbt";
  }
  return "unknown";
}

namespace {

// Hermitian Toeplitz matrix from its first row.
CMat toeplitz_from_first_row(const CVec& row) {
  const Eigen::Index m = row.size();
  CMat out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const Eigen::Index d = k - i;
      out(i, k) = d >= 0 ? row(d) : std::conj(row(-d));
    }
  }
  return out;
}

// General Toeplitz matrix from first row (size l) and first column tail
// (size l-1, entries (2..l, 1)).
CMat toeplitz_general_from_row_col(const CVec& row, const CVec& col_tail) {
  const Eigen::Index l = row.size();
  CMat out(l, l);
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index k = 0; k < l; ++k) {
      const Eigen::Index d = k - i;
      out(i, k) = d >= 0 ? row(d) : col_tail(-d - 1);
    }
  }
  return out;
}

// First-row coefficients of the Hermitian Toeplitz projection: entry d is
// the mean over diagonal d of (A upper) and conj(A lower); d = 0 is real.
CVec herm_toeplitz_row_means(const CMat& a) {
  const Eigen::Index m = a.rows();
  CVec row(m);
  for (Eigen::Index d = 0; d < m; ++d) {
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i + d < m; ++i) acc += a(i, i + d) + std::conj(a(i + d, i));
    row(d) = acc / (2.0 * static_cast<double>(m - d));
  }
  row(0) = Complex(row(0).real(), 0.0);
  return row;
}

struct BtBlocks {
  std::vector<CMat> blocks;  // blocks[w] = averaged block at block-offset w
};

// Average the block diagonals of a Hermitian matrix: upper blocks at offset
// w together with the conjugate transposes of the matching lower blocks.
BtBlocks bt_block_means(const CMat& a, int p, int l) {
  BtBlocks out;
  out.blocks.reserve(p);
  for (int w = 0; w < p; ++w) {
    CMat acc = CMat::Zero(l, l);
    for (int i = 0; i + w < p; ++i) {
      acc += a.block(i * l, (i + w) * l, l, l);
      acc += a.block((i + w) * l, i * l, l, l).adjoint();
    }
    out.blocks.push_back(acc / (2.0 * (p - w)));
  }
  // Diagonal block must be Hermitian for the assembled matrix to be.
  out.blocks[0] = 0.5 * (out.blocks[0] + out.blocks[0].adjoint().eval());
  return out;
}

CMat assemble_bt(const BtBlocks& bb, int p, int l) {
  CMat out(p * l, p * l);
  for (int i = 0; i < p; ++i) {
    for (int k = 0; k < p; ++k) {
      const int w = k - i;
      if (w >= 0)
        out.block(i * l, k * l, l, l) = bb.blocks[w];
      else
        out.block(i * l, k * l, l, l) = bb.blocks[-w].adjoint();
    }
  }
  return out;
}

}  // namespace

namespace detail {

CMat proj_toeplitz_herm_raw(const CMat& a) {
  return toeplitz_from_first_row(herm_toeplitz_row_means(a));
}

CMat proj_banded_raw(const CMat& a, int b) {
  CVec row = herm_toeplitz_row_means(a);
  for (Eigen::Index d = b + 1; d < row.size(); ++d) row(d) = Complex(0.0, 0.0);
  return toeplitz_from_first_row(row);
}

CMat proj_bt_raw(const CMat& a, int p, int l) { return assemble_bt(bt_block_means(a, p, l), p, l); }

CMat proj_tbt_raw(const CMat& a, int p, int l) {
  BtBlocks bb = bt_block_means(a, p, l);
  bb.blocks[0] = proj_toeplitz_herm_raw(bb.blocks[0]);
  for (int w = 1; w < p; ++w) bb.blocks[w] = proj_toeplitz_general(bb.blocks[w]);
  return assemble_bt(bb, p, l);
}

CMat proj_struct_raw(const CMat& a, const StructureSpec& spec) {
  switch (spec.kind) {
    case StructKind::kToeplitz:
      return proj_toeplitz_herm_raw(a);
    case StructKind::kBandedToeplitz:
      return proj_banded_raw(a, spec.b);
    case StructKind::kBlockToeplitz:
      return proj_bt_raw(a, spec.p, spec.l);
    case StructKind::kTbt:
      return proj_tbt_raw(a, spec.p, spec.l);
  }
  throw DimensionError("proj_struct: unknown kind");
}

CMat proj_psd_raw(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  RVec lam = es.eigenvalues().cwiseMax(0.0);
  CMat out = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
  return 0.5 * (out + out.adjoint().eval());
}

CMat proj_dtoep_raw(const CMat& psi, const StructureSpec& spec) {
  const Eigen::Index total = psi.rows();
  const Eigen::Index m = spec.m;
  const Eigen::Index r = total - m;
  if (r < 0) throw DimensionError("proj_dtoep: matrix smaller than structured block");
  CMat out = CMat::Zero(total, total);
  if (r > 0) {
    CMat x = psi.topLeftCorner(r, r);
    out.topLeftCorner(r, r) = 0.5 * (x + x.adjoint().eval());
  }
  out.bottomRightCorner(m, m) = proj_struct_raw(psi.bottomRightCorner(m, m), spec);
  return out;
}

CMat proj_lmi_raw(const CMat& psi, const CMat& d) { return proj_psd_raw(psi + d) - d; }

}  // namespace detail

HermMat toeplitz_from_theta(const ThetaVec& t) {
  if (t.spec.kind != StructKind::kToeplitz)
    throw DimensionError("toeplitz_from_theta: spec kind is not Toeplitz");
  t.spec.validate();
  const int m = t.spec.m;
  if (t.values.size() != 2 * m - 1) throw DimensionError("toeplitz_from_theta: length mismatch");
  CVec row(m);
  row(0) = Complex(t.values(0), 0.0);
  for (int g = 2; g <= m; ++g) row(g - 1) = Complex(t.values(g - 1), t.values(g + m - 2));
  return HermMat::from_hermitian_part(toeplitz_from_first_row(row));
}

HermMat struct_from_theta(const ThetaVec& t) {
  t.spec.validate();
  if (t.values.size() != t.spec.theta_len())
    throw DimensionError("struct_from_theta: length mismatch");
  switch (t.spec.kind) {
    case StructKind::kToeplitz:
      return toeplitz_from_theta(t);
    case StructKind::kBandedToeplitz: {
      const int m = t.spec.m, b = t.spec.b;
      CVec row = CVec::Zero(m);
      row(0) = Complex(t.values(0), 0.0);
      for (int g = 2; g <= b + 1; ++g) row(g - 1) = Complex(t.values(g - 1), t.values(g + b - 1));
      return HermMat::from_hermitian_part(toeplitz_from_first_row(row));
    }
    case StructKind::kTbt: {
      const int p = t.spec.p, l = t.spec.l;
      // theta_0 in R^{2l-1} parameterizes the Hermitian Toeplitz R_0.
      CVec row0(l);
      row0(0) = Complex(t.values(0), 0.0);
      for (int g = 2; g <= l; ++g) row0(g - 1) = Complex(t.values(g - 1), t.values(g + l - 2));
      BtBlocks bb;
      bb.blocks.push_back(toeplitz_from_first_row(row0));
      // theta_w in R^{4l-2}: [Re row, Im row, Re col tail, Im col tail].
      int off = 2 * l - 1;
      for (int w = 1; w < p; ++w) {
        CVec rw(l), cw(l - 1);
        for (int g = 0; g < l; ++g) rw(g) = Complex(t.values(off + g), t.values(off + l + g));
        for (int g = 0; g < l - 1; ++g)
          cw(g) = Complex(t.values(off + 2 * l + g), t.values(off + 3 * l - 1 + g));
        bb.blocks.push_back(toeplitz_general_from_row_col(rw, cw));
        off += 4 * l - 2;
      }
      return HermMat::from_hermitian_part(assemble_bt(bb, p, l));
    }
    case StructKind::kBlockToeplitz:
      throw DimensionError("struct_from_theta: block-Toeplitz has no theta parameterization");
  }
  throw DimensionError("struct_from_theta: unknown kind");
}

ThetaVec theta_from_struct(const HermMat& r, const StructureSpec& spec) {
  spec.validate();
  if (r.dim() != spec.m) throw DimensionError("theta_from_struct: dimension mismatch");
  const CMat proj = detail::proj_struct_raw(r.mat(), spec);
  const double scale = 1.0 + r.mat().norm();
  if ((r.mat() - proj).norm() > 1e-10 * scale)
    throw DimensionError("theta_from_struct: matrix is not in the structure set");
  RVec v(spec.theta_len());
  switch (spec.kind) {
    case StructKind::kToeplitz: {
      const int m = spec.m;
      v(0) = proj(0, 0).real();
      for (int g = 2; g <= m; ++g) {
        v(g - 1) = proj(0, g - 1).real();
        v(g + m - 2) = proj(0, g - 1).imag();
      }
      break;
    }
    case StructKind::kBandedToeplitz: {
      const int b = spec.b;
      v(0) = proj(0, 0).real();
      for (int g = 2; g <= b + 1; ++g) {
        v(g - 1) = proj(0, g - 1).real();
        v(g + b - 1) = proj(0, g - 1).imag();
      }
      break;
    }
    case StructKind::kTbt: {
      const int p = spec.p, l = spec.l;
      const CMat r0 = proj.topLeftCorner(l, l);
      v(0) = r0(0, 0).real();
      for (int g = 2; g <= l; ++g) {
        v(g - 1) = r0(0, g - 1).real();
        v(g + l - 2) = r0(0, g - 1).imag();
      }
      int off = 2 * l - 1;
      for (int w = 1; w < p; ++w) {
        const CMat rw = proj.block(0, w * l, l, l);
        for (int g = 0; g < l; ++g) {
          v(off + g) = rw(0, g).real();
          v(off + l + g) = rw(0, g).imag();
        }
        for (int g = 0; g < l - 1; ++g) {
          v(off + 2 * l + g) = rw(g + 1, 0).real();
          v(off + 3 * l - 1 + g) = rw(g + 1, 0).imag();
        }
        off += 4 * l - 2;
      }
      break;
    }
    case StructKind::kBlockToeplitz:
      throw DimensionError("theta_from_struct: block-Toeplitz has no theta parameterization");
  }
  return ThetaVec{spec, std::move(v)};
}

HermMat proj_toeplitz_herm(const HermMat& a) {
  return HermMat::from_hermitian_part(detail::proj_toeplitz_herm_raw(a.mat()));
}

CMat proj_toeplitz_general(const CMat& a) {
  if (a.rows() != a.cols()) throw DimensionError("proj_toeplitz_general: matrix is not square");
  const Eigen::Index l = a.rows();
  CVec row(l), col_tail(l > 1 ? l - 1 : 0);
  for (Eigen::Index d = 0; d < l; ++d) {
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i + d < l; ++i) acc += a(i, i + d);
    row(d) = acc / static_cast<double>(l - d);
  }
  for (Eigen::Index d = 1; d < l; ++d) {
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i + d < l; ++i) acc += a(i + d, i);
    col_tail(d - 1) = acc / static_cast<double>(l - d);
  }
  return toeplitz_general_from_row_col(row, col_tail);
}

HermMat proj_banded(const HermMat& a, int b) {
  StructureSpec::banded(static_cast<int>(a.dim()), b);  // validates range
  return HermMat::from_hermitian_part(detail::proj_banded_raw(a.mat(), b));
}

HermMat proj_bt(const HermMat& a, int p, int l) {
  if (p * l != a.dim()) throw DimensionError("proj_bt: p*l must equal the dimension");
  return HermMat::from_hermitian_part(detail::proj_bt_raw(a.mat(), p, l));
}

HermMat proj_tbt(const HermMat& a, int p, int l) {
  if (p * l != a.dim()) throw DimensionError("proj_tbt: p*l must equal the dimension");
  return HermMat::from_hermitian_part(detail::proj_tbt_raw(a.mat(), p, l));
}

HermMat proj_struct(const HermMat& a, const StructureSpec& spec) {
  spec.validate();
  if (a.dim() != spec.m) throw DimensionError("proj_struct: dimension mismatch");
  return HermMat::from_hermitian_part(detail::proj_struct_raw(a.mat(), spec));
}

HermMat proj_psd(const HermMat& a) {
  return HermMat::from_hermitian_part(detail::proj_psd_raw(a.mat()));
}

HermMat proj_dtoep(const HermMat& psi, const StructureSpec& spec) {
  spec.validate();
  return HermMat::from_hermitian_part(detail::proj_dtoep_raw(psi.mat(), spec));
}

HermMat proj_lmi(const HermMat& psi, const HermMat& d) {
  if (psi.dim() != d.dim()) throw DimensionError("proj_lmi: dimension mismatch");
  return HermMat::from_hermitian_part(detail::proj_lmi_raw(psi.mat(), d.mat()));
}

}  // namespace atomcov
