#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "doctest.h"
#include "pickgrass/drury_arveson.hpp"
#include "pickgrass/quotient.hpp"
#include "pickgrass/rng.hpp"

using namespace pickgrass;

namespace {

// (z1 - lambda z2)(z1 - mu z2), marked on the first coordinate.
HomogPoly split_poly(cplx lambda, cplx mu) {
  std::map<MultiIndex, cplx> c;
  c[MultiIndex({2, 0})] = 1.0;
  c[MultiIndex({1, 1})] = -(lambda + mu);
  c[MultiIndex({0, 2})] = lambda * mu;
  return HomogPoly(2, 2, std::move(c), 0);
}

HomogPoly coordinate_poly() {
  std::map<MultiIndex, cplx> c;
  c[MultiIndex({1, 0})] = 1.0;
  return HomogPoly(2, 1, std::move(c), 0);
}

TruncVec monomial(int d, int N, const MultiIndex& a, cplx coef = 1.0) {
  TruncVec v(d, N);
  v.set_coeff(a, coef);
  return v;
}

Mat defect_matrix(const QuotientModel& q) {
  const int n = q.dim();
  Mat D = Mat::Identity(n, n);
  for (const Mat& S : q.shifts) D -= S * S.adjoint();
  return D;
}

}  // namespace

TEST_CASE("homogeneous polynomial validation and evaluation") {
  std::map<MultiIndex, cplx> c;
  c[MultiIndex({2, 0})] = 1.0;
  c[MultiIndex({1, 0})] = 1.0;
  CHECK_THROWS_AS(HomogPoly(2, 2, c, 0), validation_error);

  std::map<MultiIndex, cplx> mixed;
  mixed[MultiIndex({1, 1})] = 1.0;
  CHECK_THROWS_AS(HomogPoly(2, 2, mixed, 0), validation_error);
  CHECK_THROWS_AS(HomogPoly(2, 2, std::map<MultiIndex, cplx>{}, 0),
                  validation_error);
  CHECK_THROWS_AS(HomogPoly(2, 0, mixed, 0), validation_error);
  CHECK_THROWS_AS(HomogPoly(2, 2, mixed, 5), validation_error);

  const HomogPoly p = split_poly(0.5, -0.5);
  CHECK(p.degree() == 2);
  CHECK(p.axis() == 0);
  Vec on_curve(2), off_curve(2);
  on_curve << 0.1, 0.2;
  off_curve << 0.3, 0.2;
  CHECK(std::abs(p.evaluate(on_curve)) <= 1e-15);
  CHECK(std::abs(p.evaluate(off_curve) - cplx(0.08)) <= 1e-15);

  std::map<MultiIndex, cplx> sum;
  sum[MultiIndex({2, 0})] = 1.0;
  sum[MultiIndex({0, 2})] = 1.0;
  const HomogPoly s(2, 2, sum);  // default marks the last coordinate
  CHECK(s.axis() == 1);
}

TEST_CASE("compress: quotient by one coordinate is the one-variable shift") {
  const int N = 8;
  const QuotientModel q = compress(coordinate_poly(), N);
  CHECK(q.dim() == N + 1);
  for (int m = 0; m <= N; ++m) CHECK(q.graded_dims[m] == 1);

  CHECK(q.shifts[0].norm() <= 1e-12);
  const Mat& S2 = q.shifts[1];
  for (int r = 0; r <= N; ++r)
    for (int c = 0; c <= N; ++c) {
      if (r == c + 1)
        CHECK(std::abs(std::abs(S2(r, c)) - 1.0) <= 1e-12);
      else
        CHECK(std::abs(S2(r, c)) <= 1e-12);
    }

  // Defect below the truncation band: the rank-one projection onto constants.
  const Mat D = defect_matrix(q);
  Mat P0 = Mat::Zero(N, N);
  P0(0, 0) = 1.0;
  CHECK((D.topLeftCorner(N, N) - P0).norm() <= 1e-10);
}

TEST_CASE("compress: graded dimensions, orthogonality, and the defect") {
  const int N = 12;
  const HomogPoly p = split_poly(0.5, -0.5);
  const QuotientModel q = compress(p, N);

  CHECK(q.graded_dims[0] == 1);
  for (int m = 1; m <= N; ++m) CHECK(q.graded_dims[m] == 2);
  CHECK(q.dim() == 1 + 2 * N);

  const Mat gram = q.basis.adjoint() * q.basis;
  CHECK((gram - Mat::Identity(q.dim(), q.dim())).norm() <= 1e-12);

  // Every p * (monomial of degree <= N-2) projects to zero in the model.
  const TruncVec pv(2, N, p.coeffs());
  for (const MultiIndex& g : indices_up_to(2, N - 2)) {
    const Vec coords = model_coords(q, pv * monomial(2, N, g));
    CHECK(coords.norm() <= 1e-10);
  }

  const Mat D = defect_matrix(q);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (D + D.adjoint()));
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);

  const int below_top = q.degree_offset(N);
  Mat P0 = Mat::Zero(below_top, below_top);
  P0(0, 0) = 1.0;
  CHECK((D.topLeftCorner(below_top, below_top) - P0).norm() <= 1e-10);

  CHECK_THROWS_AS(compress(p, 1), validation_error);
}

TEST_CASE("fiber: simple and multiple points of the split example") {
  const int N = 40;
  const QuotientModel q = compress(split_poly(0.5, -0.5), N);
  const std::vector<int> base{1};

  Vec t(1);
  t << 0.2;
  const FiberResult two = fiber(q, base, t);
  CHECK(two.dimension == 2);
  REQUIRE(two.points.size() == 2);
  CHECK(two.points[0].second == 1);
  CHECK(two.points[1].second == 1);
  CHECK(std::abs(two.points[0].first(0) - cplx(-0.1)) <= 1e-9);
  CHECK(std::abs(two.points[1].first(0) - cplx(0.1)) <= 1e-9);
  CHECK(std::abs(two.points[0].first(1) - cplx(0.2)) <= 1e-15);
  CHECK(two.discrepancy <= 1e-8);
  CHECK(two.root_ratio_max ==
        doctest::Approx(0.1 / std::hypot(0.1, 0.2)).epsilon(1e-9));
  CHECK(two.within_cone_bound);
  CHECK(two.cone_bound >= two.root_ratio_max - 1e-9);
  CHECK(two.cone_bound < 1.0);

  Vec zero(1);
  zero << 0.0;
  const FiberResult merged = fiber(q, base, zero);
  CHECK(merged.dimension == 2);
  REQUIRE(merged.points.size() == 1);
  CHECK(merged.points[0].second == 2);
  REQUIRE(merged.exact_basis.size() == 2);
  const auto& k0 = std::get<KernelDescriptor>(merged.exact_basis[0]);
  const auto& k1 = std::get<KernelDescriptor>(merged.exact_basis[1]);
  CHECK(k0.alpha.total() == 0);
  CHECK(k1.alpha[0] == 1);
  CHECK(k0.point.norm() <= 1e-12);
  CHECK(merged.discrepancy <= 1e-8);

  const QuotientModel line = compress(coordinate_poly(), N);
  Vec t3(1);
  t3 << 0.3;
  const FiberResult one = fiber(line, base, t3);
  CHECK(one.dimension == 1);
  REQUIRE(one.points.size() == 1);
  CHECK(std::abs(one.points[0].first(0)) <= 1e-12);
  CHECK(one.discrepancy <= 1e-8);
}

TEST_CASE("fiber: validation, degenerate slices, and the one-variable edge") {
  const QuotientModel q = compress(split_poly(0.5, -0.5), 12);
  Vec t(1);
  t << 0.2;
  CHECK_THROWS_AS(fiber(q, {0, 1}, t), validation_error);
  CHECK_THROWS_AS(fiber(q, {}, Vec(0)), validation_error);
  CHECK_THROWS_AS(fiber(q, {3}, t), validation_error);
  CHECK_THROWS_AS(fiber(q, {1}, Vec(2)), validation_error);

  // p = z1^2 has a zero coefficient on z2^2, so the base {0} degenerates.
  std::map<MultiIndex, cplx> c;
  c[MultiIndex({2, 0})] = 1.0;
  const QuotientModel pure = compress(HomogPoly(2, 2, c, 0), 12);
  CHECK_THROWS_AS(fiber(pure, {0}, t), validation_error);

  Vec far(1);
  far << 0.995;
  CHECK_THROWS_AS(fiber(q, {1}, far), validation_error);

  // One variable: the whole truncated quotient is a single multiple fiber.
  std::map<MultiIndex, cplx> cube;
  cube[MultiIndex(std::vector<int>{3})] = 1.0;
  const QuotientModel jet = compress(HomogPoly(1, 3, cube), 6);
  CHECK(jet.dim() == 3);
  const FiberResult f = fiber(jet, {}, Vec(0));
  CHECK(f.dimension == 3);
  REQUIRE(f.points.size() == 1);
  CHECK(f.points[0].second == 3);
  CHECK(f.discrepancy <= 1e-10);
  CHECK(f.within_cone_bound);
}

TEST_CASE("fiber: dimension matches the degree across the family") {
  Rng rng(0x51BE7);
  const std::vector<int> base{1};
  for (int trial = 0; trial < 6; ++trial) {
    cplx lambda, mu;
    do {
      lambda = 0.6 * rng.uniform(0.2, 1.0) *
               std::polar(1.0, rng.uniform(0.0, 6.283185307179586));
      mu = 0.6 * rng.uniform(0.2, 1.0) *
           std::polar(1.0, rng.uniform(0.0, 6.283185307179586));
    } while (std::abs(lambda - mu) < 0.1);
    const HomogPoly p = split_poly(lambda, mu);
    const QuotientModel q = compress(p, 30);
    for (int k = 0; k < 3; ++k) {
      Vec t(1);
      t << rng.uniform(0.05, 0.3) *
               std::polar(1.0, rng.uniform(0.0, 6.283185307179586));
      const FiberResult f = fiber(q, base, t);
      CHECK(f.dimension == 2);
      int total_mult = 0;
      for (const auto& [x, mult] : f.points) {
        total_mult += mult;
        CHECK(std::abs(p.evaluate(x)) <= 1e-10);
      }
      CHECK(total_mult == 2);
      CHECK(f.discrepancy <= 1e-6);
      CHECK(f.within_cone_bound);
    }
  }
}

TEST_CASE("gleason: range and kernel sides split cleanly") {
  const int N = 40;
  const QuotientModel q = compress(split_poly(0.5, -0.5), N);
  const std::vector<int> base{1};
  Vec t(1);
  t << 0.2;

  // z1^2 - 0.01 vanishes at both fiber points (+-0.1, 0.2).
  TruncVec vanishing(2, N);
  vanishing.set_coeff(MultiIndex({2, 0}), 1.0);
  vanishing.set_coeff(MultiIndex({0, 0}), -0.01);
  const GleasonResult in_range =
      gleason_decompose(q, base, t, model_coords(q, vanishing));
  CHECK(in_range.residual <= 1e-8);
  REQUIRE(in_range.h.size() == 1);
  CHECK(in_range.h[0].size() == q.dim());

  Vec pt(2);
  pt << 0.1, 0.2;
  const TruncVec kernel_vec =
      kernel_coefficients(pt, MultiIndex(2), N).series;
  const GleasonResult off_range =
      gleason_decompose(q, base, t, model_coords(q, kernel_vec));
  CHECK(off_range.residual >= 0.1);

  Vec pt2(2);
  pt2 << -0.1, 0.2;
  const TruncVec kernel_vec2 =
      kernel_coefficients(pt2, MultiIndex(2), N).series;
  CHECK(gleason_decompose(q, base, t, model_coords(q, kernel_vec2)).residual >=
        0.1);

  const GleasonResult zero =
      gleason_decompose(q, base, t, Vec::Zero(q.dim()));
  CHECK(zero.residual == 0.0);
  REQUIRE(zero.h.size() == 1);
  CHECK(zero.h[0].norm() <= 1e-15);

  CHECK_THROWS_AS(gleason_decompose(q, base, t, Vec::Zero(3)),
                  validation_error);
  CHECK_THROWS_AS(gleason_decompose(q, {0, 1}, t, Vec::Zero(q.dim())),
                  validation_error);
}

TEST_CASE("metric: closed form against the frame Gram") {
  const MetricCurvatureResult even = metric_curvature(0.5, -0.5);
  Mat H0 = even.H_closed(cplx(0.0));
  CHECK(std::abs(H0(0, 0) - cplx(1.0)) <= 1e-15);
  CHECK(std::abs(H0(1, 1) - cplx(1.0)) <= 1e-15);
  CHECK(std::abs(H0(0, 1)) <= 1e-15);
  CHECK(even.h0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(even.cross_check_error <= 1e-8);
  CHECK(even.curvature_at_0 == doctest::Approx(3.0).epsilon(1e-4));

  const Mat Hg0 = even.H_gram(cplx(0.0));
  CHECK((Hg0 - Mat::Identity(2, 2)).norm() <= 1e-12);

  const cplx sample(0.2, 0.1);
  const Mat Hs = even.H_closed(sample);
  CHECK((Hs - Hs.adjoint()).norm() <= 1e-14);
  Eigen::SelfAdjointEigenSolver<Mat> es(Hs);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  const MetricCurvatureResult uneven = metric_curvature(0.5, -1.0 / 3.0);
  CHECK(uneven.h0 == doctest::Approx(25.0 / 36.0).epsilon(1e-14));
  CHECK(std::abs(uneven.H_closed(cplx(0.0))(1, 1) - cplx(25.0 / 36.0)) <=
        1e-15);
  CHECK(uneven.curvature_at_0 ==
        doctest::Approx(3.0 + 1.0 / 36.0).epsilon(1e-4));
  CHECK(uneven.cross_check_error <= 1e-8);

  const cplx lam(0.4, 0.1), mu(-0.2, 0.0);
  const MetricCurvatureResult complex_case = metric_curvature(lam, mu);
  CHECK(complex_case.cross_check_error <= 1e-8);
  CHECK(complex_case.curvature_at_0 ==
        doctest::Approx(3.0 + std::norm(lam + mu)).epsilon(1e-4));
  // Pointwise agreement away from the symmetric grid pins the
  // parametrization of the frame, not just radial profiles.
  const cplx off_grid(0.15, 0.23);
  CHECK((complex_case.H_closed(off_grid) - complex_case.H_gram(off_grid))
            .norm() <= 1e-8);

  const MetricCurvatureResult rich = metric_curvature(lam, mu, 1e-3, 60, true);
  CHECK(rich.curvature_at_0 ==
        doctest::Approx(3.0 + std::norm(lam + mu)).epsilon(1e-4));
  CHECK(std::abs(rich.curvature_at_0 - complex_case.curvature_at_0) <= 1e-6);

  CHECK_THROWS_AS(metric_curvature(0.5, 0.5), validation_error);
  CHECK_THROWS_AS(metric_curvature(0.0, 0.5), validation_error);
  CHECK_THROWS_AS(metric_curvature(0.5, -0.5, 1e-6), validation_error);
  CHECK_THROWS_AS(metric_curvature(0.5, -0.5, 0.1), validation_error);
  CHECK_THROWS_AS(metric_curvature(3.0, -0.5), validation_error);
}

TEST_CASE("irreducibility: trivial commutant and the curvature diagonal") {
  Rng rng(0xC0117);
  const auto draw_samples = [&rng](int count) {
    std::vector<std::pair<cplx, cplx>> s;
    for (int i = 0; i < count; ++i) {
      const Vec z = rng.ball_point(1, 0.25);
      const Vec w = rng.ball_point(1, 0.25);
      s.emplace_back(z(0), w(0));
    }
    return s;
  };

  const auto samples = draw_samples(25);
  const IrreducibilityResult even = irreducibility_check(0.5, -0.5, samples);
  CHECK(even.commutant_dimension == 1);
  CHECK(even.irreducible);
  CHECK(even.conclusive);
  CHECK_FALSE(even.degenerate_samples);
  CHECK(even.second_derivative_diagonal(0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(even.second_derivative_diagonal(1) == doctest::Approx(2.0).epsilon(1e-4));

  const IrreducibilityResult uneven =
      irreducibility_check(0.5, -1.0 / 3.0, draw_samples(25));
  CHECK(uneven.commutant_dimension == 1);
  CHECK(uneven.second_derivative_diagonal(1) ==
        doctest::Approx(2.0 + 1.0 / 36.0).epsilon(1e-4));

  const cplx lam(0.4, 0.1), mu(-0.2, 0.0);
  const IrreducibilityResult cx = irreducibility_check(lam, mu, draw_samples(25));
  CHECK(cx.commutant_dimension == 1);
  CHECK(cx.irreducible);
  CHECK(cx.second_derivative_diagonal(0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(cx.second_derivative_diagonal(1) ==
        doctest::Approx(2.0 + std::norm(lam + mu)).epsilon(1e-4));

  // A vanishing first parameter blinds the off-diagonal entries: the test
  // reports a fat commutant and flags itself inconclusive.
  const IrreducibilityResult blind =
      irreducibility_check(0.0, -0.5, draw_samples(25));
  CHECK_FALSE(blind.conclusive);
  CHECK(blind.commutant_dimension >= 2);
  CHECK_FALSE(blind.irreducible);

  // Repeating one sample pair keeps the first-half commutant fat; adding a
  // genuinely different pair later shrinks it and trips the flag.
  std::vector<std::pair<cplx, cplx>> lopsided{
      {cplx(0.2, 0.0), cplx(0.15, 0.05)},
      {cplx(0.2, 0.0), cplx(0.15, 0.05)},
      {cplx(-0.1, 0.2), cplx(0.05, -0.2)},
      {cplx(0.1, -0.15), cplx(-0.2, 0.1)}};
  const IrreducibilityResult tripped =
      irreducibility_check(0.5, -0.5, lopsided);
  CHECK(tripped.commutant_dimension == 1);
  CHECK(tripped.degenerate_samples);

  CHECK_THROWS_AS(irreducibility_check(0.5, 0.5, samples), validation_error);
  CHECK_THROWS_AS(
      irreducibility_check(0.5, -0.5,
                           std::vector<std::pair<cplx, cplx>>{{0.1, 0.1}}),
      validation_error);
  CHECK_THROWS_AS(
      irreducibility_check(0.5, -0.5,
                           std::vector<std::pair<cplx, cplx>>{
                               {cplx(0.9, 0.0), cplx(0.9, 0.0)},
                               {cplx(0.1, 0.0), cplx(0.1, 0.0)}}),
      validation_error);
}
