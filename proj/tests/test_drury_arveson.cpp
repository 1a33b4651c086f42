#include "pickgrass/drury_arveson.hpp"

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
MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }

TruncVec random_poly(Rng& rng, int d, int N, int deg) {
  TruncVec f(d, N);
  for (const MultiIndex& a : indices_up_to(d, deg))
    f.set_coeff(a, 0.5 * rng.complex_normal());
  return f;
}
}  // namespace

TEST_CASE("kernel evaluation: desk values") {
  MultiIndex z0(2);
  Vec p = v2(0.5, 0.0);
  // k(p, p) = 1/(1 - 0.25) = 4/3
  CHECK(std::abs(kernel_derivative_eval(z0, z0, p, p) - cplx(4.0 / 3.0)) < 1e-15);
  // d=1: d_z d_wbar k at (z,w) = (1 + z wbar) / (1 - z wbar)^3 ... check at 0: 1
  MultiIndex one1(std::vector<int>{1});
  CHECK(std::abs(kernel_derivative_eval(one1, one1, v1(0.0), v1(0.0)) - cplx(1.0)) <
        1e-15);
  // ||k_lambda^(1)||^2 for d=1: (1+|l|^2)/(1-|l|^2)^3 at l=0.5
  double expect = (1.0 + 0.25) / std::pow(0.75, 3);
  CHECK(derivative_kernel_inner(one1, v1(0.5), one1, v1(0.5)).real() ==
        doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("Bombieri weights: desk values") {
  CHECK(monomial_norm_sq(mi({1, 1})) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(monomial_norm_sq(mi({2, 0})) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(monomial_norm_sq(mi({2, 1})) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // distinct monomials are orthogonal
  TruncVec a(2, 3), b(2, 3);
  a.set_coeff(mi({1, 1}), 1.0);
  b.set_coeff(mi({2, 0}), 1.0);
  CHECK(std::abs(a.inner(b)) == 0.0);
  CHECK(a.norm_sq() == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("kernel expansion: geometric desk case and exact tail") {
  auto [series, tail] = kernel_coefficients(v1(0.5), MultiIndex(1), 2);
  CHECK(std::abs(series.coeff(mi({0})) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(series.coeff(mi({1})) - cplx(0.5)) < 1e-15);
  CHECK(std::abs(series.coeff(mi({2})) - cplx(0.25)) < 1e-15);
  // d=1 tail^2 = sum_{k>2} 0.25^k = 0.25^3/(1-0.25)
  CHECK(tail == doctest::Approx(std::sqrt(std::pow(0.25, 3) / 0.75)).epsilon(1e-12));

  // k_0^(a) = |a|! z^a exactly
  auto [s2, t2] = kernel_coefficients(v2(0.0, 0.0), mi({1, 1}), 4);
  CHECK(std::abs(s2.coeff(mi({1, 1})) - cplx(2.0)) < 1e-15);
  CHECK(s2.coeffs().size() == 1);
  CHECK(t2 == doctest::Approx(0.0));
  // truncating below the monomial degree leaves everything in the tail
  auto [s3, t3] = kernel_coefficients(v2(0.0, 0.0), mi({1, 1}), 1);
  CHECK(s3.coeffs().empty());
  CHECK(t3 == doctest::Approx(2.0 * std::sqrt(0.5)).epsilon(1e-14));
}

TEST_CASE("truncated kernels reproduce truncated evaluation") {
  Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    int d = 1 + t % 3, N = 4 + t % 4;
    Vec lam = rng.ball_point(d, 0.8);
    TruncVec f = random_poly(rng, d, N, N);
    auto [k, tail] = kernel_coefficients(lam, MultiIndex(d), N);
    CHECK(std::abs(f.inner(k) - f.evaluate(lam)) < 1e-11);
    // derivative functionals
    MultiIndex a(d);
    a[t % d] = 1 + t % 2;
    CHECK(std::abs(space_inner(SpaceVector(f), SpaceVector(KernelDescriptor{lam, a})) -
                   f.derivative_at(a, lam)) < 1e-12);
  }
}

TEST_CASE("exact vs truncated kernel inner products within tail product") {
  Rng rng(37);
  for (int t = 0; t < 40; ++t) {
    int d = 1 + t % 3, N = 26;
    Vec lam = rng.ball_point(d, 0.45), mu = rng.ball_point(d, 0.45);
    MultiIndex a(d), b(d);
    a[t % d] = t % 3;
    b[(t + 1) % d] = (t + 1) % 2;
    auto [ka, ta] = kernel_coefficients(lam, a, N);
    auto [kb, tb] = kernel_coefficients(mu, b, N);
    cplx exact = derivative_kernel_inner(b, mu, a, lam);  // <k_mu^(b), k_lam^(a)>
    cplx trunc = kb.inner(ka);
    CHECK(std::abs(exact - trunc) <= ta * tb + 1e-13);
  }
}

TEST_CASE("Leibniz lowering identity for coordinate adjoints") {
  Rng rng(41);
  for (int t = 0; t < 60; ++t) {
    int d = 1 + t % 3, N = 6;
    Vec lam = rng.ball_point(d, 0.8);
    int j = t % d;
    MultiIndex a(d);
    a[(t + 1) % d] = t % 3;
    TruncVec v = random_poly(rng, d, N, N - 1);
    TruncVec zj(d, N);
    zj.set_coeff(MultiIndex::unit(d, j), 1.0);
    // <z_j v, k^(a)> = lambda_j <v, k^(a)> + a_j <v, k^(a - e_j)>
    cplx lhs = (zj * v).derivative_at(a, lam);
    cplx rhs = lam(j) * v.derivative_at(a, lam);
    if (a[j] > 0) rhs += static_cast<double>(a[j]) * v.derivative_at(a.minus(j), lam);
    CHECK(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("multiplication matrices: d=1 shift desk case") {
  BasisContext ctx(1, 2);
  REQUIRE(ctx.dim() == 3);
  TruncVec z(1, 2);
  z.set_coeff(mi({1}), 1.0);
  Mat M = multiplication_matrix(z, ctx);
  Mat S = coordinate_mult_matrix(0, ctx);
  CHECK((M - S).norm() < 1e-15);
  Mat expect = Mat::Zero(3, 3);
  expect(1, 0) = 1.0;
  expect(2, 1) = 1.0;
  CHECK((S - expect).norm() < 1e-15);
}

TEST_CASE("multiplication matrices compose and respect the cap") {
  Rng rng(43);
  for (int t = 0; t < 20; ++t) {
    int d = 1 + t % 3, N = 3 + t % 3;
    BasisContext ctx(d, N);
    TruncVec f = random_poly(rng, d, N, 2);
    TruncVec g = random_poly(rng, d, N, 1);
    Mat Mf = multiplication_matrix(f, ctx);
    Mat Mg = multiplication_matrix(g, ctx);
    Mat Mfg = multiplication_matrix(f * g, ctx);
    CHECK((Mf * Mg - Mfg).norm() < 1e-10 * (1.0 + Mfg.norm()));
    // action agrees with truncated polynomial product
    TruncVec h = random_poly(rng, d, N, N);
    Vec via_matrix = Mf * h.orthonormal_coords(ctx);
    CHECK((via_matrix - (f * h).orthonormal_coords(ctx)).norm() < 1e-11);
  }
}

TEST_CASE("coordinate matrices: sparse application and row identity") {
  Rng rng(47);
  for (int t = 0; t < 12; ++t) {
    int d = 1 + t % 3, N = 3 + t % 3;
    BasisContext ctx(d, N);
    Mat sum = Mat::Zero(ctx.dim(), ctx.dim());
    for (int j = 0; j < d; ++j) {
      Mat S = coordinate_mult_matrix(j, ctx);
      Vec v = rng.matrix(ctx.dim(), 1);
      CHECK((apply_coordinate_mult(j, ctx, v) - S * v).norm() < 1e-12);
      CHECK((apply_coordinate_mult_adjoint(j, ctx, v) - S.adjoint() * v).norm() < 1e-12);
      sum += S * S.adjoint();
    }
    // sum_j M_j M_j^* = I - P_0 exactly on the truncation
    Mat expect = Mat::Identity(ctx.dim(), ctx.dim());
    expect(0, 0) = 0.0;
    CHECK((sum - expect).norm() < 1e-13);
  }
}

TEST_CASE("gram matrices: desk case and positivity") {
  // {k_0, k_{1/2}} in d=1: [[1, 1], [1, 4/3]]
  std::vector<SpaceVector> vs;
  vs.emplace_back(KernelDescriptor{v1(0.0), MultiIndex(1)});
  vs.emplace_back(KernelDescriptor{v1(0.5), MultiIndex(1)});
  Mat G = gram_matrix(vs);
  CHECK(std::abs(G(0, 0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(G(0, 1) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(G(1, 0) - cplx(1.0)) < 1e-15);
  CHECK(std::abs(G(1, 1) - cplx(4.0 / 3.0)) < 1e-15);

  Rng rng(53);
  for (int t = 0; t < 20; ++t) {
    int d = 1 + t % 3;
    std::vector<SpaceVector> mix;
    for (int i = 0; i < 4; ++i) {
      if (i % 2 == 0) {
        MultiIndex a(d);
        a[i % d] = i % 3;
        mix.emplace_back(KernelDescriptor{rng.ball_point(d, 0.7), a});
      } else {
        mix.emplace_back(random_poly(rng, d, 4, 3));
      }
    }
    Mat Gm = gram_matrix(mix);
    CHECK((Gm - Gm.adjoint()).norm() < 1e-10 * (1.0 + Gm.norm()));
    Eigen::SelfAdjointEigenSolver<Mat> es((Gm + Gm.adjoint()) / 2.0);
    CHECK(es.eigenvalues().minCoeff() > -1e-9 * (1.0 + Gm.norm()));
  }
}
