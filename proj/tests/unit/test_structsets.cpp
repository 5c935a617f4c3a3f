#include <doctest.h>

#include <random>

#include "atomcov/errors.hpp"
#include "atomcov/hermlin.hpp"
#include "atomcov/structsets.hpp"
#include "test_util.hpp"

using namespace atomcov;
using testutil::bt_subspace_basis;
using testutil::herm_toeplitz_basis;
using testutil::hermitian_basis;
using testutil::least_squares_projection;
using testutil::random_hermitian;

TEST_SUITE_BEGIN("structsets");

TEST_CASE("StructureSpec validation and theta lengths") {
  CHECK(StructureSpec::toeplitz(5).theta_len() == 9);
  CHECK(StructureSpec::banded(5, 2).theta_len() == 5);
  CHECK(StructureSpec::tbt(4, 4).theta_len() == 7 + 3 * 14);
  CHECK_THROWS_AS(StructureSpec::banded(5, 5), DimensionError);
  StructureSpec bad = StructureSpec::tbt(2, 2);
  bad.m = 5;  // p*l != m
  CHECK_THROWS_AS(bad.validate(), DimensionError);
  CHECK_THROWS_AS(StructureSpec::block_toeplitz(2, 2).theta_len(), DimensionError);
}

TEST_CASE("toeplitz_from_theta builds the first row") {
  RVec unit = RVec::Zero(5);
  unit(0) = 1.0;
  CHECK((toeplitz_from_theta({StructureSpec::toeplitz(3), unit}).mat() -
         CMat::Identity(3, 3)).norm() <= 1e-15);

  RVec v(3);
  v << 2.0, 1.0, 0.5;
  CMat expect(2, 2);
  expect << Complex(2, 0), Complex(1, 0.5), Complex(1, -0.5), Complex(2, 0);
  CHECK((toeplitz_from_theta({StructureSpec::toeplitz(2), v}).mat() - expect).norm() <= 1e-15);
}

TEST_CASE("theta round-trips for the three parameterized structures") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const StructureSpec& spec :
       {StructureSpec::toeplitz(5), StructureSpec::banded(6, 2), StructureSpec::tbt(3, 2)}) {
    RVec theta(spec.theta_len());
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = normal(rng);
    const HermMat r = struct_from_theta({spec, theta});
    const ThetaVec back = theta_from_struct(r, spec);
    CHECK((back.values - theta).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("theta_from_struct rejects matrices outside the set") {
  std::mt19937_64 rng(37);
  const HermMat h = random_hermitian(4, rng);
  CHECK_THROWS_AS(theta_from_struct(h, StructureSpec::toeplitz(4)), DimensionError);
}

TEST_CASE("proj_toeplitz_herm averages diagonals") {
  CMat a(2, 2);
  a << Complex(1, 0), Complex(2, 1), Complex(2, -1), Complex(3, 0);
  CMat expect(2, 2);
  expect << Complex(2, 0), Complex(2, 1), Complex(2, -1), Complex(2, 0);
  CHECK((proj_toeplitz_herm(HermMat(a)).mat() - expect).norm() <= 1e-15);

  // Toeplitz input is a fixed point.
  const HermMat t = toeplitz_from_theta({StructureSpec::toeplitz(3), RVec::Ones(5)});
  CHECK((proj_toeplitz_herm(t).mat() - t.mat()).norm() <= 1e-15);
}

TEST_CASE("proj_toeplitz_herm matches the least-squares oracle") {
  std::mt19937_64 rng(41);
  const HermMat a = random_hermitian(4, rng);
  const CMat oracle = least_squares_projection(a.mat(), herm_toeplitz_basis(4));
  CHECK((proj_toeplitz_herm(a).mat() - oracle).norm() <= 1e-12);
}

TEST_CASE("proj_toeplitz_general averages all diagonals without symmetrizing") {
  CMat a(2, 2);
  a << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
  CMat expect(2, 2);
  expect << Complex(2.5, 0), Complex(2, 0), Complex(3, 0), Complex(2.5, 0);
  CHECK((proj_toeplitz_general(a) - expect).norm() <= 1e-15);

  CMat t(3, 3);
  t << Complex(1, 2), Complex(5, 0), Complex(6, 1), Complex(7, 1), Complex(1, 2), Complex(5, 0),
      Complex(8, 0), Complex(7, 1), Complex(1, 2);
  CHECK((proj_toeplitz_general(t) - t).norm() <= 1e-15);

  std::mt19937_64 rng(43);
  const CMat g = testutil::random_complex(3, 3, rng);
  const CMat oracle = least_squares_projection(g, testutil::general_toeplitz_basis(3));
  CHECK((proj_toeplitz_general(g) - oracle).norm() <= 1e-12);
}

TEST_CASE("proj_banded degenerate bands") {
  std::mt19937_64 rng(47);
  const HermMat a = random_hermitian(5, rng);
  CHECK((proj_banded(a, 4).mat() - proj_toeplitz_herm(a).mat()).norm() <= 1e-14);
  const double mean_diag = a.mat().diagonal().real().mean();
  CHECK((proj_banded(a, 0).mat() - mean_diag * CMat::Identity(5, 5)).norm() <= 1e-13);
}

TEST_CASE("proj_banded zero pattern matches the bandwidth") {
  std::mt19937_64 rng(53);
  const HermMat a = random_hermitian(5, rng);
  const HermMat b = proj_banded(a, 2);
  // Offsets 3 and 4 are exactly zero; offsets 0..2 constant along diagonals.
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 5; ++k)
      if (std::abs(i - k) > 2) CHECK(std::abs(b.mat()(i, k)) == 0.0);
  CHECK(b.mat()(0, 1) == b.mat()(3, 4));
  CHECK(b.mat()(0, 2) == b.mat()(2, 4));
}

TEST_CASE("proj_bt fixed points and oracle") {
  std::mt19937_64 rng(59);
  const HermMat a = random_hermitian(4, rng);
  // p = 1: a single block, unchanged.
  CHECK((proj_bt(a, 1, 4).mat() - a.mat()).norm() <= 1e-14);
  // BT input unchanged.
  const HermMat bt = proj_bt(a, 2, 2);
  CHECK((proj_bt(bt, 2, 2).mat() - bt.mat()).norm() <= 1e-13);
  // Least-squares oracle over the Hermitian BT subspace.
  const CMat oracle = least_squares_projection(a.mat(), bt_subspace_basis(2, 2, false));
  CHECK((bt.mat() - oracle).norm() <= 1e-12);
}

TEST_CASE("proj_tbt fixed points and oracle") {
  std::mt19937_64 rng(61);
  // Kronecker product of Toeplitz factors is TBT, hence unchanged.
  RVec th(3);
  th << 3.0, 1.0, 0.5;
  const HermMat t1 = toeplitz_from_theta({StructureSpec::toeplitz(2), th});
  const HermMat k = HermMat::from_hermitian_part(kron(t1.mat(), t1.mat()));
  CHECK((proj_tbt(k, 2, 2).mat() - k.mat()).norm() <= 1e-14);

  const HermMat a = random_hermitian(6, rng);
  const HermMat tbt = proj_tbt(a, 3, 2);
  CHECK((proj_tbt(tbt, 3, 2).mat() - tbt.mat()).norm() <= 1e-13);
  const CMat oracle = least_squares_projection(a.mat(), bt_subspace_basis(3, 2, true));
  CHECK((tbt.mat() - oracle).norm() <= 1e-12);
}

TEST_CASE("proj_psd clamps negative eigenvalues") {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = -1.0;
  CMat expect = CMat::Zero(2, 2);
  expect(0, 0) = 2.0;
  CHECK((proj_psd(HermMat(d)).mat() - expect).norm() <= 1e-14);

  std::mt19937_64 rng(67);
  const HermMat p = testutil::random_psd(3, rng);
  CHECK((proj_psd(p).mat() - p.mat()).norm() <= 1e-13);

  // Distance minimality: ||A - P(A)||_F^2 equals the sum of squared
  // negative eigenvalues (eigen-oracle).
  const HermMat h = random_hermitian(4, rng);
  const Evd e = evd(h);
  double neg2 = 0.0;
  for (Eigen::Index i = 0; i < e.eigenvalues.size(); ++i) {
    const double v = std::min(e.eigenvalues(i), 0.0);
    neg2 += v * v;
  }
  const double dist = (proj_psd(h).mat() - h.mat()).squaredNorm();
  CHECK(dist == doctest::Approx(neg2).epsilon(1e-10));
}

TEST_CASE("proj_dtoep keeps the upper block and structures the lower") {
  std::mt19937_64 rng(71);
  const StructureSpec spec = StructureSpec::toeplitz(3);
  CHECK((proj_dtoep(HermMat::zero(5), spec).mat()).norm() == 0.0);

  // Feasible block-diagonal input is unchanged.
  CMat feas = CMat::Zero(5, 5);
  feas.topLeftCorner(2, 2) = testutil::random_psd(2, rng).mat();
  feas.bottomRightCorner(3, 3) =
      toeplitz_from_theta({spec, (RVec(5) << 4, 1, 0, 0.5, -0.2).finished()}).mat();
  CHECK((proj_dtoep(HermMat(feas), spec).mat() - feas).norm() <= 1e-14);

  // Least-squares oracle over the block-diagonal-with-Toeplitz subspace.
  const HermMat psi = random_hermitian(5, rng);
  std::vector<CMat> basis;
  for (const auto& s : hermitian_basis(2)) {
    CMat e = CMat::Zero(5, 5);
    e.topLeftCorner(2, 2) = s;
    basis.push_back(e);
  }
  for (const auto& s : herm_toeplitz_basis(3)) {
    CMat e = CMat::Zero(5, 5);
    e.bottomRightCorner(3, 3) = s;
    basis.push_back(e);
  }
  const CMat oracle = least_squares_projection(psi.mat(), basis);
  CHECK((proj_dtoep(psi, spec).mat() - oracle).norm() <= 1e-12);
}

TEST_CASE("proj_lmi shifts by D around the PSD projection") {
  std::mt19937_64 rng(73);
  const HermMat psi = random_hermitian(4, rng);
  CHECK((proj_lmi(psi, HermMat::zero(4)).mat() - proj_psd(psi).mat()).norm() <= 1e-14);

  const HermMat d = random_hermitian(4, rng);
  const HermMat feas = HermMat::from_hermitian_part(
      testutil::random_psd(4, rng, 0.1).mat() - d.mat());
  CHECK((proj_lmi(feas, d).mat() - feas.mat()).norm() <= 1e-12);

  const HermMat out = proj_lmi(psi, d);
  const Evd e = evd(HermMat::from_hermitian_part(out.mat() + d.mat()));
  CHECK(e.eigenvalues(0) >= -1e-12);
}

TEST_CASE("subspace projections are idempotent, nonexpansive, linear, self-adjoint") {
  std::mt19937_64 rng(79);
  const StructureSpec specs[] = {StructureSpec::toeplitz(6), StructureSpec::banded(6, 2),
                                 StructureSpec::block_toeplitz(3, 2), StructureSpec::tbt(3, 2)};
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 10; ++trial) {
      const HermMat a = random_hermitian(6, rng);
      const HermMat b = random_hermitian(6, rng);
      const HermMat pa = proj_struct(a, spec);
      const HermMat pb = proj_struct(b, spec);
      CHECK((proj_struct(pa, spec).mat() - pa.mat()).norm() <= 1e-12);
      CHECK((pa.mat() - pb.mat()).norm() <= (a.mat() - b.mat()).norm() + 1e-12);
      const HermMat lin = HermMat::from_hermitian_part(0.3 * a.mat() + 0.7 * b.mat());
      CHECK((proj_struct(lin, spec).mat() - (0.3 * pa.mat() + 0.7 * pb.mat())).norm() <= 1e-12);
      CHECK(testutil::herm_inner(pa.mat(), b.mat()) ==
            doctest::Approx(testutil::herm_inner(a.mat(), pb.mat())).epsilon(1e-10));
    }
  }
}

TEST_SUITE_END();
