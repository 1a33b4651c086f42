#include "pickgrass/blaschke.hpp"

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "pickgrass/rng.hpp"

using namespace pickgrass;

namespace {
Vec v1(cplx a) {
  Vec v(1);
  v << a;
  return v;
}
Vec v2(cplx a, cplx b) {
  Vec v(2);
  v << a, b;
  return v;
}
std::vector<BallPoint> random_config(Rng& rng, int d, int n, double rmax) {
  std::vector<BallPoint> pts;
  while (static_cast<int>(pts.size()) < n) {
    Vec p = rng.ball_point(d, rmax);
    bool ok = true;
    for (const BallPoint& q : pts)
      if ((q.coords() - p).norm() < 1e-3) ok = false;
    if (ok) pts.emplace_back(BallPoint(p));
  }
  return pts;
}
}  // namespace

TEST_CASE("one-point chain at the origin is -z") {
  BlaschkeChain b = build_blaschke({BallPoint(v2(0.0, 0.0))});
  CHECK(b.width() == 2);
  auto row = evaluate_blaschke(b, v2(0.3, 0.4));
  CHECK(std::abs(row(0) - cplx(-0.3)) < 1e-15);
  CHECK(std::abs(row(1) - cplx(-0.4)) < 1e-15);
  // 1 - b(z) b(z)^* = 1 - |z|^2
  CHECK(std::abs((1.0 - (row * row.adjoint())(0).real()) - (1.0 - 0.25)) < 1e-15);
}

TEST_CASE("d=1 single factor matches the classical modulus") {
  cplx lam(0.4, 0.2);
  BlaschkeChain b = build_blaschke({BallPoint(v1(lam))});
  Rng rng(83);
  for (int t = 0; t < 50; ++t) {
    cplx z = 0.9 * rng.uniform() * std::polar(1.0, 6.2831853 * rng.uniform());
    cplx chain = evaluate_blaschke(b, v1(z))(0);
    cplx classical = (z - lam) / (1.0 - std::conj(lam) * z);
    CHECK(std::abs(std::abs(chain) - std::abs(classical)) < 1e-13);
  }
}

TEST_CASE("two-point chain in d=2: width and vanishing") {
  std::vector<BallPoint> pts{BallPoint(v2(0.0, 0.0)), BallPoint(v2(0.5, 0.0))};
  BlaschkeChain b = build_blaschke(pts);
  CHECK(b.width() == 3);
  for (const BallPoint& p : pts)
    CHECK(evaluate_blaschke(b, p.coords()).norm() <= 1e-10);
  // strictly contractive inside
  Rng rng(89);
  for (int t = 0; t < 30; ++t) {
    Vec z = rng.ball_point(2, 0.95);
    CHECK(evaluate_blaschke(b, z).norm() < 1.0);
  }
}

TEST_CASE("chain validation") {
  CHECK_THROWS_AS(build_blaschke({}), validation_error);
  CHECK_THROWS_AS(
      build_blaschke({BallPoint(v1(0.2)), BallPoint(v1(0.2 + 1e-12))}),
      validation_error);
  CHECK_THROWS_AS(build_blaschke({BallPoint(v1(0.97))}), validation_error);
  CHECK_NOTHROW(build_blaschke({BallPoint(v1(0.97))}, /*allow_near_boundary=*/true));
}

TEST_CASE("one-step identity: 1 - phi(z) phi(w)^*") {
  Rng rng(97);
  for (int t = 0; t < 100; ++t) {
    int d = 1 + t % 4;
    Vec lam = rng.ball_point(d, 0.9), z = rng.ball_point(d, 0.9), w = rng.ball_point(d, 0.9);
    Vec fz = mobius_involution(lam, z), fw = mobius_involution(lam, w);
    cplx lhs = 1.0 - fw.dot(fz);  // sum fz_i conj(fw_i)
    cplx rhs = (1.0 - lam.squaredNorm()) * (1.0 - w.dot(z)) /
               ((1.0 - lam.dot(z)) * (1.0 - w.dot(lam)));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("kernel identity on random configurations") {
  Rng rng(101);
  for (int cfg = 0; cfg < 25; ++cfg) {
    int d = 1 + cfg % 4, n = 1 + cfg % 5;
    auto pts = random_config(rng, d, n, 0.8);
    BlaschkeChain b = build_blaschke(pts);
    std::vector<std::pair<Vec, Vec>> samples;
    for (int s = 0; s < 20; ++s)
      samples.emplace_back(rng.ball_point(d, 0.85), rng.ball_point(d, 0.85));
    CHECK(kernel_identity_error(b, samples) <= 1e-9);
    for (const BallPoint& p : pts)
      CHECK(evaluate_blaschke(b, p.coords()).norm() <= 1e-10);
  }
}

TEST_CASE("Schur-type positivity of (1 - b(z)b(w)^*) / (1 - <z,w>)") {
  Rng rng(103);
  for (int cfg = 0; cfg < 10; ++cfg) {
    int d = 1 + cfg % 3, n = 1 + cfg % 4;
    auto pts = random_config(rng, d, n, 0.75);
    BlaschkeChain b = build_blaschke(pts);
    const int m = 6;
    std::vector<Vec> zs;
    for (int i = 0; i < m; ++i) zs.push_back(rng.ball_point(d, 0.8));
    Mat K(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        auto bi = evaluate_blaschke(b, zs[i]);
        auto bj = evaluate_blaschke(b, zs[j]);
        cplx denom = 1.0 - zs[j].dot(zs[i]);
        K(i, j) = (cplx(1.0) - (bi * bj.adjoint())(0)) / denom;
      }
    Eigen::SelfAdjointEigenSolver<Mat> es((K + K.adjoint()) / 2.0);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("projection is independent of the chain ordering") {
  Rng rng(107);
  for (int cfg = 0; cfg < 10; ++cfg) {
    int d = 1 + cfg % 3, n = 2 + cfg % 3;
    auto pts = random_config(rng, d, n, 0.7);
    auto rev = pts;
    std::reverse(rev.begin(), rev.end());
    BlaschkeChain b1 = build_blaschke(pts), b2 = build_blaschke(rev);
    const MultiIndex zero(d);
    for (int s = 0; s < 20; ++s) {
      Vec z = rng.ball_point(d, 0.8), w = rng.ball_point(d, 0.8);
      cplx k = kernel_derivative_eval(zero, zero, z, w);
      cplx f1 = (cplx(1.0) - (evaluate_blaschke(b1, z) *
                              evaluate_blaschke(b1, w).adjoint())(0)) * k;
      cplx f2 = (cplx(1.0) - (evaluate_blaschke(b2, z) *
                              evaluate_blaschke(b2, w).adjoint())(0)) * k;
      CHECK(std::abs(f1 - f2) < 1e-9);
    }
  }
}

TEST_CASE("classical product in d=1 handles multiplicities") {
  Divisor X(1, {{BallPoint(v1(cplx(0.3, 0.1))), 2}, {BallPoint(v1(-0.4)), 1}});
  ClassicalProduct p = classical_product(X);
  cplx lam(0.3, 0.1);
  // double zero: value and first derivative vanish (finite difference probe)
  CHECK(std::abs(evaluate_classical(p, lam)) < 1e-14);
  double h = 1e-6;
  CHECK(std::abs(evaluate_classical(p, lam + h) - evaluate_classical(p, lam)) / h <
        1e-4);
  CHECK(std::abs(evaluate_classical(p, cplx(-0.4))) < 1e-14);
  // modulus below 1 in the disc, 1 on the circle
  Rng rng(109);
  for (int t = 0; t < 30; ++t) {
    cplx z = std::polar(rng.uniform(), 6.2831853 * rng.uniform());
    CHECK(std::abs(evaluate_classical(p, z)) < 1.0);
    cplx u = std::polar(1.0, 6.2831853 * rng.uniform());
    CHECK(std::abs(std::abs(evaluate_classical(p, u)) - 1.0) < 1e-12);
  }
}

TEST_CASE("truncated expansion matches pointwise evaluation") {
  Rng rng(113);
  for (int cfg = 0; cfg < 8; ++cfg) {
    int d = 1 + cfg % 3, n = 1 + cfg % 3, N = 18;
    auto pts = random_config(rng, d, n, 0.5);
    BlaschkeChain b = build_blaschke(pts);
    ExpandedRow row = expand_blaschke(b, N);
    REQUIRE(static_cast<int>(row.comp.size()) == b.width());
    for (int s = 0; s < 10; ++s) {
      Vec z = rng.ball_point(d, 0.45);
      auto exact = evaluate_blaschke(b, z);
      for (int j = 0; j < b.width(); ++j) {
        // truncated series differs from the true value by at most the tail
        CHECK(std::abs(row.comp[j].evaluate(z) - exact(j)) <=
              row.tails[j] + 1e-12);
      }
    }
  }
}

TEST_CASE("origin chain multiplier: M_b M_b^* = sum_j M_j M_j^*") {
  for (int d = 1; d <= 3; ++d) {
    Vec zero = Vec::Zero(d);
    BlaschkeChain b = build_blaschke({BallPoint(zero)});
    int N = 5;
    TruncatedMultiplier tm = truncated_multiplier_matrix(b, N);
    REQUIRE(static_cast<int>(tm.blocks.size()) == d);
    Mat sum = Mat::Zero(tm.ctx.dim(), tm.ctx.dim());
    for (const Mat& B : tm.blocks) sum += B * B.adjoint();
    Mat expect = Mat::Identity(tm.ctx.dim(), tm.ctx.dim());
    expect(0, 0) = 0.0;  // I - P_constants
    CHECK((sum - expect).norm() < 1e-13);
    for (double t : tm.tails) CHECK(t == 0.0);  // -z is exactly polynomial
  }
}

TEST_CASE("d=1 multiplier at 0.5: complement projects onto the kernel span") {
  BlaschkeChain b = build_blaschke({BallPoint(v1(0.5))});
  const int N = 40, CAP = 30;
  TruncatedMultiplier tm = truncated_multiplier_matrix(b, N);
  Mat P = Mat::Identity(tm.ctx.dim(), tm.ctx.dim()) -
          tm.blocks[0] * tm.blocks[0].adjoint();
  // Gram projection onto span{k_0.5} in the truncation.
  Vec k = kernel_coefficients(v1(0.5), MultiIndex(1), N).series
              .orthonormal_coords(tm.ctx);
  Mat Pk = (k * k.adjoint()) / k.squaredNorm();
  Mat diff = (P - Pk).topLeftCorner(CAP + 1, CAP + 1);  // degree <= 30 block
  CHECK(diff.norm() < 1e-8);
}

TEST_CASE("truncated multiplier validation") {
  BlaschkeChain b = build_blaschke({BallPoint(v1(0.5))});
  CHECK_THROWS_AS(truncated_multiplier_matrix(b, 0), validation_error);
}
