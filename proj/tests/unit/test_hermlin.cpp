#include <doctest.h>

#include <cmath>
#include <random>

#include "atomcov/errors.hpp"
#include "atomcov/hermlin.hpp"
#include "atomcov/simkit.hpp"
#include "test_util.hpp"

using namespace atomcov;
using testutil::random_complex;
using testutil::random_hermitian;
using testutil::random_psd;

TEST_SUITE_BEGIN("hermlin");

TEST_CASE("HermMat enforces hermiticity and finiteness") {
  CMat bad(2, 2);
  bad << Complex(1, 0), Complex(2, 1), Complex(5, 0), Complex(3, 0);
  CHECK_THROWS_AS(HermMat{bad}, DimensionError);
  CMat rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(HermMat{rect}, DimensionError);
  CMat nan2 = CMat::Zero(2, 2);
  nan2(0, 0) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(HermMat{nan2}, NumericalError);
}

TEST_CASE("scm of a single snapshot is the outer product") {
  SnapshotSet s;
  s.data.resize(2, 1);
  s.data << Complex(1, 0), Complex(0, 1);
  const HermMat r = scm(s);
  CMat expect(2, 2);
  expect << Complex(1, 0), Complex(0, -1), Complex(0, 1), Complex(1, 0);
  CHECK((r.mat() - expect).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("scm of all-zero snapshots is zero") {
  SnapshotSet s;
  s.data = CMat::Zero(3, 5);
  CHECK(scm(s).mat().norm() == 0.0);
}

TEST_CASE("scm concentrates around the identity truth") {
  // Monte-Carlo concentration: m=2, n=1000, R=I, seed 7.
  const SnapshotSet s = sample_snapshots(HermMat::identity(2), 1000, 7);
  const HermMat r = scm(s);
  CHECK((r.mat() - CMat::Identity(2, 2)).norm() <= 0.15);
}

TEST_CASE("scm requires at least one snapshot") {
  SnapshotSet s;
  s.data.resize(2, 0);
  CHECK_THROWS_AS(scm(s), DimensionError);
}

TEST_CASE("fb_average on a 2x2 averages the diagonal") {
  CMat s(2, 2);
  s << Complex(1, 0), Complex(2, 1), Complex(2, -1), Complex(5, 0);
  const HermMat fb = fb_average(HermMat(s));
  CMat expect(2, 2);
  expect << Complex(3, 0), Complex(2, 1), Complex(2, -1), Complex(3, 0);
  CHECK((fb.mat() - expect).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("fb_average fixes persymmetric inputs and outputs") {
  std::mt19937_64 rng(11);
  const HermMat h = random_hermitian(4, rng);
  const HermMat fb = fb_average(h);
  // Persymmetry J R* J == R, elementwise.
  const CMat flip = fb.mat().reverse().conjugate();
  CHECK((flip - fb.mat()).cwiseAbs().maxCoeff() <= 1e-14);
  // Already persymmetric input is unchanged.
  const HermMat fb2 = fb_average(fb);
  CHECK((fb2.mat() - fb.mat()).norm() <= 1e-14);
}

TEST_CASE("factor_data recovers identity and rank-one structure") {
  const DataFactor f = factor_data(HermMat::identity(3));
  CHECK(f.rank() == 3);
  CHECK((f.y * f.y.adjoint() - CMat::Identity(3, 3)).norm() <= 1e-12);

  CVec v(3);
  v << Complex(1, 1), Complex(0, 2), Complex(-1, 0);
  const HermMat vv = HermMat::from_hermitian_part(v * v.adjoint());
  const DataFactor f1 = factor_data(vv);
  CHECK(f1.rank() == 1);
  CHECK((f1.y * f1.y.adjoint() - vv.mat()).norm() <= 1e-12 * vv.mat().norm());
}

TEST_CASE("factor_data reconstructs random PSD matrices") {
  std::mt19937_64 rng(3);
  const HermMat p = random_psd(5, rng);
  const DataFactor f = factor_data(p);
  CHECK((f.y * f.y.adjoint() - p.mat()).norm() <= 1e-12 * (1.0 + p.mat().norm()));
  // Factoring Y Y^H again yields the same rank (projection property).
  const DataFactor f2 = factor_data(HermMat::from_hermitian_part(f.y * f.y.adjoint()));
  CHECK(f2.rank() == f.rank());
}

TEST_CASE("factor_data rejects indefinite input") {
  CMat a = CMat::Identity(3, 3);
  a(2, 2) = -1.0;
  CHECK_THROWS_AS(factor_data(HermMat(a)), NotPsd);
}

TEST_CASE("neg_log_likelihood closed forms") {
  std::mt19937_64 rng(5);
  const HermMat r_fb = random_psd(4, rng, 0.5);
  // R = I: value is the trace.
  CHECK(neg_log_likelihood(HermMat::identity(4), r_fb) ==
        doctest::Approx(r_fb.mat().trace().real()).epsilon(1e-12));
  // R = R_FB: value is m + log det.
  const double expect = 4.0 + log_det_pd(r_fb);
  CHECK(neg_log_likelihood(r_fb, r_fb) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("neg_log_likelihood rejects singular R") {
  CMat a = CMat::Identity(2, 2);
  a(1, 1) = 0.0;
  CHECK_THROWS_AS(neg_log_likelihood(HermMat(a), HermMat::identity(2)), NotPositiveDefinite);
}

TEST_CASE("raw-sample likelihood equals the FB-averaged form on Toeplitz R") {
  // (1/n) sum y^H R^{-1} y + log|R| == Tr(R_FB R^{-1}) + log|R| for
  // persymmetric R; checked on a PD Toeplitz R and random snapshots.
  LineSpectrumModel model;
  model.m = 4;
  model.frequencies = {0.7, 2.1};
  model.powers = {1.0, 2.0};
  model.noise_floor = 1.0;
  const HermMat r = cov_line_spectrum(model);
  const SnapshotSet s = sample_snapshots(r, 12, 99);
  const HermMat r_fb = fb_average(scm(s));

  const CMat rinv_y = solve_pd(r, s.data);
  double raw = 0.0;
  for (Eigen::Index k = 0; k < s.count(); ++k)
    raw += (s.data.col(k).adjoint() * rinv_y.col(k))(0, 0).real();
  raw = raw / static_cast<double>(s.count()) + log_det_pd(r);

  const double fb_form = neg_log_likelihood(r, r_fb);
  CHECK(std::abs(raw - fb_form) <= 1e-10 * (1.0 + std::abs(fb_form)));
}

TEST_CASE("surrogate_objective closed forms and likelihood equivalence") {
  CHECK(surrogate_objective({HermMat::zero(2), HermMat::identity(3)}) == doctest::Approx(0.0));
  CHECK(surrogate_objective({HermMat::identity(2), HermMat::identity(3)}) == doctest::Approx(2.0));

  std::mt19937_64 rng(8);
  const HermMat r_fb = random_psd(4, rng, 0.2);
  const HermMat r = random_psd(4, rng, 0.5);
  const DataFactor f = factor_data(r_fb);
  const CMat x = f.y.adjoint() * solve_pd(r, f.y);
  const double lhs = surrogate_objective({HermMat::from_hermitian_part(x), r});
  const double rhs = neg_log_likelihood(r, r_fb);
  CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(rhs)));
}

TEST_CASE("sqrt_psd computes Hermitian square roots") {
  CHECK((sqrt_psd(HermMat::identity(3)).mat() - CMat::Identity(3, 3)).norm() <= 1e-13);
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  CMat expect = CMat::Zero(2, 2);
  expect(0, 0) = 2.0;
  expect(1, 1) = 3.0;
  CHECK((sqrt_psd(HermMat(d)).mat() - expect).norm() <= 1e-13);

  std::mt19937_64 rng(17);
  const HermMat p = random_psd(4, rng);
  const HermMat w = sqrt_psd(p);
  CHECK((w.mat() * w.mat() - p.mat()).norm() <= 1e-12 * (1.0 + p.mat().norm()));
  CHECK_THROWS_AS(sqrt_psd(HermMat((-CMat::Identity(2, 2)).eval())), NotPsd);
}

TEST_CASE("evd sorts ascending and reconstructs") {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  const Evd e = evd(HermMat(d));
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(3.0));

  const Evd eye = evd(HermMat::identity(3));
  CHECK((eye.eigenvalues.array() - 1.0).abs().maxCoeff() <= 1e-14);

  std::mt19937_64 rng(23);
  const HermMat h = random_hermitian(3, rng);
  const Evd r = evd(h);
  const CMat rec = r.eigenvectors * r.eigenvalues.asDiagonal() * r.eigenvectors.adjoint();
  CHECK((rec - h.mat()).norm() <= 1e-12 * (1.0 + h.mat().norm()));
  CHECK((r.eigenvectors.adjoint() * r.eigenvectors - CMat::Identity(3, 3)).norm() <= 1e-12);
}

TEST_SUITE_END();
