#include "pickgrass/quotient.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "pickgrass/rng.hpp"

namespace pickgrass {
namespace {

// ||z^(a+b)|| / ||z^a|| under the weighted monomial inner product, computed
// as a product of modest ratios so large factorials never materialize.
double norm_ratio(const MultiIndex& sum, const MultiIndex& part) {
  return std::sqrt(monomial_norm_sq(sum) / monomial_norm_sq(part));
}

// Coefficients (lowest degree first) of x -> p(t completed with x in the
// omitted slot); base[i] is the coordinate carrying t(i).
std::vector<cplx> slice_coefficients(const HomogPoly& p,
                                     const std::vector<int>& base,
                                     const Eigen::VectorXcd& t, int omitted) {
  std::vector<cplx> a(p.degree() + 1, cplx(0.0));
  for (const auto& [alpha, coef] : p.coeffs()) {
    cplx term = coef;
    for (size_t i = 0; i < base.size(); ++i)
      for (int k = 0; k < alpha[base[i]]; ++k) term *= t(static_cast<int>(i));
    a[alpha[omitted]] += term;
  }
  return a;
}

// Roots of a polynomial with nonzero leading coefficient, via the companion
// matrix of its monic normalization.
std::vector<cplx> poly_roots(const std::vector<cplx>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  Mat comp = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -a[i] / a[n];
  Eigen::ComplexEigenSolver<Mat> es(comp, false);
  std::vector<cplx> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

// Single-linkage grouping of root values; returns (mean, count) pairs.
std::vector<std::pair<cplx, int>> cluster_roots(const std::vector<cplx>& r,
                                                double radius) {
  const int n = static_cast<int>(r.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(r[i] - r[j]) <= radius) parent[find(i)] = find(j);
  std::map<int, std::pair<cplx, int>> groups;
  for (int i = 0; i < n; ++i) {
    auto& g = groups[find(i)];
    g.first += r[i];
    ++g.second;
  }
  std::vector<std::pair<cplx, int>> out;
  for (auto& [root, g] : groups)
    out.emplace_back(g.first / static_cast<double>(g.second), g.second);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.first.real() != y.first.real()) return x.first.real() < y.first.real();
    return x.first.imag() < y.first.imag();
  });
  return out;
}

void check_base_set(int d, const std::vector<int>& base, const Vec& t) {
  if (static_cast<int>(base.size()) != d - 1)
    throw validation_error("base set must omit exactly one coordinate");
  if (t.size() != static_cast<Eigen::Index>(base.size()))
    throw validation_error("base value count mismatch");
  std::vector<bool> seen(d, false);
  for (int b : base) {
    if (b < 0 || b >= d || seen[b])
      throw validation_error("base set must list distinct coordinates");
    seen[b] = true;
  }
}

int omitted_coordinate(int d, const std::vector<int>& base) {
  std::vector<bool> seen(d, false);
  for (int b : base) seen[b] = true;
  for (int i = 0; i < d; ++i)
    if (!seen[i]) return i;
  return -1;
}

// Leading slice coefficient = coefficient of the pure power of the omitted
// coordinate (degree-independent of the base values, by homogeneity).
cplx leading_slice_coeff(const HomogPoly& p, int omitted) {
  MultiIndex pure(p.dim());
  pure[omitted] = p.degree();
  auto it = p.coeffs().find(pure);
  return it == p.coeffs().end() ? cplx(0.0) : it->second;
}

// The closed-form metric of the plane-curve example at base parameter z.
Mat example_metric(cplx lambda, cplx mu, cplx z) {
  const double a = 1.0 + std::norm(lambda);
  const double b = 1.0 + std::norm(mu);
  const cplx c = 1.0 + lambda * std::conj(mu);
  const double t = std::norm(z);
  const double m = std::norm(lambda - mu);
  const double lm = std::abs(lambda) * std::abs(mu);
  Mat H(2, 2);
  H(0, 0) = 1.0 / (1.0 - a * t);
  H(0, 1) = lambda * std::conj(lambda - mu) * std::conj(z) /
            ((1.0 - a * t) * (1.0 - c * t));
  H(1, 0) = std::conj(H(0, 1));
  H(1, 1) = m * (1.0 - (1.0 - lm) * t) * (1.0 - (1.0 + lm) * t) /
            ((1.0 - a * t) * (1.0 - b * t) * std::norm(1.0 - c * t));
  return H;
}

// Sesquiholomorphic extension of the same metric: t = |z|^2 is replaced by
// s = z * conj(w), and the squared modulus in the last denominator splits
// into the two factors (1 - c s)(1 - conj(c) s).
Mat example_kernel(cplx lambda, cplx mu, cplx z, cplx w) {
  const double a = 1.0 + std::norm(lambda);
  const double b = 1.0 + std::norm(mu);
  const cplx c = 1.0 + lambda * std::conj(mu);
  const cplx s = z * std::conj(w);
  const double m = std::norm(lambda - mu);
  const double lm = std::abs(lambda) * std::abs(mu);
  Mat K(2, 2);
  K(0, 0) = 1.0 / (1.0 - a * s);
  K(0, 1) = lambda * std::conj(lambda - mu) * std::conj(w) /
            ((1.0 - a * s) * (1.0 - c * s));
  K(1, 0) = std::conj(lambda) * (lambda - mu) * z /
            ((1.0 - a * s) * (1.0 - std::conj(c) * s));
  K(1, 1) = m * (1.0 - (1.0 - lm) * s) * (1.0 - (1.0 + lm) * s) /
            ((1.0 - a * s) * (1.0 - b * s) * (1.0 - c * s) *
             (1.0 - std::conj(c) * s));
  return K;
}

// Curvature of the metric at 0: the metric-normalized mixed second
// derivative (d d-bar H - d-bar H H^{-1} d H) H^{-1}, entrywise central
// finite differences with step h.
Mat metric_curvature_matrix(const std::function<Mat(cplx)>& H, double h) {
  const Mat H0 = H(cplx(0.0));
  const Mat Hxp = H(cplx(h, 0.0)), Hxm = H(cplx(-h, 0.0));
  const Mat Hyp = H(cplx(0.0, h)), Hym = H(cplx(0.0, -h));
  const Mat lap = (Hxp + Hxm + Hyp + Hym - 4.0 * H0) / (h * h);
  const Mat dx = (Hxp - Hxm) / (2.0 * h);
  const Mat dy = (Hyp - Hym) / (2.0 * h);
  const Mat dbar = 0.5 * (dx + cplx(0.0, 1.0) * dy);
  const Mat dhol = 0.5 * (dx - cplx(0.0, 1.0) * dy);
  const Mat inv = H0.inverse();
  return (0.25 * lap - dbar * inv * dhol) * inv;
}

// Frame of the example over base parameter u: the kernel at (lambda u, u)
// and the difference quotient against (mu u, u), expanded to degree N. At
// u = 0 the difference quotient extends to a first-degree monomial.
std::pair<TruncVec, TruncVec> example_frame(cplx lambda, cplx mu, cplx u,
                                            int N) {
  if (std::abs(u) < 1e-14) {
    TruncVec phi1(2, N), phi2(2, N);
    phi1.set_coeff(MultiIndex(2), cplx(1.0));
    phi2.set_coeff(MultiIndex::unit(2, 0), std::conj(lambda - mu));
    return {phi1, phi2};
  }
  Vec p1(2), p2(2);
  p1 << lambda * u, u;
  p2 << mu * u, u;
  TruncVec k1 = kernel_coefficients(p1, MultiIndex(2), N).series;
  TruncVec k2 = kernel_coefficients(p2, MultiIndex(2), N).series;
  TruncVec phi2 = (k1 - k2) * (1.0 / std::conj(u));
  return {k1, phi2};
}

}  // namespace

HomogPoly::HomogPoly(int d, int degree, std::map<MultiIndex, cplx> coefficients,
                     int axis)
    : d_(d), n_(degree), axis_(axis < 0 ? d - 1 : axis), c_(std::move(coefficients)) {
  if (d_ < 1) throw validation_error("polynomial needs at least one variable");
  if (n_ < 1) throw validation_error("polynomial degree must be positive");
  if (axis_ < 0 || axis_ >= d_)
    throw validation_error("marked coordinate out of range");
  for (auto it = c_.begin(); it != c_.end();) {
    if (it->first.dim() != d_)
      throw validation_error("coefficient index dimension mismatch");
    if (it->first.total() != n_)
      throw validation_error("polynomial is not homogeneous of the declared degree");
    it = (it->second == cplx(0.0)) ? c_.erase(it) : std::next(it);
  }
  if (c_.empty()) throw validation_error("polynomial must be nonzero");
  MultiIndex pure(d_);
  pure[axis_] = n_;
  auto it = c_.find(pure);
  if (it == c_.end() || it->second == cplx(0.0))
    throw validation_error("polynomial vanishes on the marked coordinate axis");
}

cplx HomogPoly::evaluate(const Vec& z) const {
  if (z.size() != d_) throw validation_error("evaluation dimension mismatch");
  cplx s = 0.0;
  for (const auto& [alpha, coef] : c_) {
    cplx term = coef;
    for (int i = 0; i < d_; ++i)
      for (int k = 0; k < alpha[i]; ++k) term *= z(i);
    s += term;
  }
  return s;
}

int QuotientModel::degree_offset(int m) const {
  int ofs = 0;
  for (int k = 0; k < m; ++k) ofs += graded_dims[k];
  return ofs;
}

QuotientModel compress(const HomogPoly& p, int N) {
  const int d = p.dim();
  const int n = p.degree();
  if (N < n) throw validation_error("degree cap below the polynomial degree");
  BasisContext ctx(d, N);

  // Per graded component, an orthonormal basis of the complement of the
  // image of multiplication by p from degree m-n.
  std::vector<Mat> blocks(N + 1);
  std::vector<int> dims(N + 1, 0);
  int q = 0;
  for (int m = 0; m <= N; ++m) {
    const int cnt = ctx.degree_count(m);
    if (m < n) {
      blocks[m] = Mat::Identity(cnt, cnt);
      dims[m] = cnt;
      q += cnt;
      continue;
    }
    const int src = ctx.degree_count(m - n);
    const int row0 = ctx.degree_offset(m);
    const int col0 = ctx.degree_offset(m - n);
    Mat block = Mat::Zero(cnt, src);
    for (int cidx = 0; cidx < src; ++cidx) {
      const MultiIndex& gamma = ctx.indices[col0 + cidx];
      for (const auto& [beta, coef] : p.coeffs()) {
        const MultiIndex target = beta + gamma;
        block(ctx.index_of.at(target) - row0, cidx) +=
            coef * norm_ratio(target, gamma);
      }
    }
    Eigen::JacobiSVD<Mat> svd(block, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double thresh =
        (sv.size() ? sv(0) : 0.0) * std::max(cnt, src) * 1e-12;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > thresh) ++rank;
    blocks[m] = svd.matrixU().rightCols(cnt - rank);
    dims[m] = cnt - rank;
    q += dims[m];
  }

  Mat basis = Mat::Zero(ctx.dim(), q);
  int col = 0;
  for (int m = 0; m <= N; ++m) {
    basis.block(ctx.degree_offset(m), col, ctx.degree_count(m), dims[m]) =
        blocks[m];
    col += dims[m];
  }

  std::vector<Mat> shifts(d);
  for (int j = 0; j < d; ++j) {
    Mat full(ctx.dim(), q);
    for (int k = 0; k < q; ++k)
      full.col(k) = apply_coordinate_mult(j, ctx, basis.col(k));
    shifts[j] = basis.adjoint() * full;
  }
  return {p, N, std::move(ctx), std::move(basis), std::move(shifts),
          std::move(dims)};
}

Vec model_coords(const QuotientModel& q, const TruncVec& f) {
  if (f.dim() != q.ctx.d || f.degree_cap() != q.N)
    throw validation_error("truncation mismatch");
  return q.basis.adjoint() * f.orthonormal_coords(q.ctx);
}

TruncVec model_lift(const QuotientModel& q, const Vec& x) {
  if (x.size() != q.dim()) throw validation_error("coordinate length mismatch");
  return TruncVec::from_orthonormal_coords(q.ctx, q.basis * x);
}

FiberResult fiber(const QuotientModel& q, const std::vector<int>& base,
                  const Vec& t) {
  const int d = q.p.dim();
  check_base_set(d, base, t);
  const int om = omitted_coordinate(d, base);
  const cplx lead = leading_slice_coeff(q.p, om);
  if (std::abs(lead) == 0.0)
    throw validation_error("slice degenerates in the omitted coordinate");

  FiberResult out;

  // Roots of the one-variable slice, grouped into multiplicity clusters.
  std::vector<cplx> roots = poly_roots(slice_coefficients(q.p, base, t, om));
  double maxroot = 0.0;
  for (cplx r : roots) maxroot = std::max(maxroot, std::abs(r));
  const auto clusters = cluster_roots(roots, 3e-4 * std::max(1.0, maxroot));

  for (const auto& [root, mult] : clusters) {
    Vec x = Vec::Zero(d);
    for (size_t i = 0; i < base.size(); ++i)
      x(base[i]) = t(static_cast<int>(i));
    x(om) = root;
    if (x.norm() > 0.99)
      throw validation_error("fiber point outside the certified ball");
    out.points.emplace_back(x, mult);
    for (int l = 0; l < mult; ++l) {
      MultiIndex alpha(d);
      alpha[om] = l;
      out.exact_basis.push_back(KernelDescriptor{x, alpha});
    }
    const double nx = x.norm();
    if (nx > 0.0)
      out.root_ratio_max = std::max(out.root_ratio_max, std::abs(root) / nx);
  }

  // Numeric joint eigenspace of the adjoint shifts over the base values.
  const int qdim = q.dim();
  if (base.empty()) {
    out.numeric_basis = Mat::Identity(qdim, qdim);
    out.dimension = qdim;
  } else {
    Mat stack(static_cast<int>(base.size()) * qdim, qdim);
    for (size_t i = 0; i < base.size(); ++i)
      stack.middleRows(static_cast<int>(i) * qdim, qdim) =
          q.shifts[base[i]].adjoint() -
          std::conj(t(static_cast<int>(i))) * Mat::Identity(qdim, qdim);
    Eigen::JacobiSVD<Mat> svd(stack, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-6 * smax) ++rank;
    out.dimension = qdim - rank;
    out.numeric_basis = svd.matrixV().rightCols(out.dimension);
  }

  // Principal-angle distance between the numeric span and the truncated
  // exact span, both expressed in ambient orthonormal coordinates.
  const int ne = static_cast<int>(out.exact_basis.size());
  if (ne != out.dimension) {
    out.discrepancy = 1.0;
  } else {
    Mat exact(q.ctx.dim(), ne);
    for (int i = 0; i < ne; ++i) {
      const auto& kd = std::get<KernelDescriptor>(out.exact_basis[i]);
      exact.col(i) = kernel_coefficients(kd.point, kd.alpha, q.N)
                         .series.orthonormal_coords(q.ctx);
    }
    Eigen::HouseholderQR<Mat> qr(exact);
    Mat qe = qr.householderQ() * Mat::Identity(q.ctx.dim(), ne);
    Mat lift = q.basis * out.numeric_basis;
    Eigen::JacobiSVD<Mat> ang(qe.adjoint() * lift);
    const auto& sv = ang.singularValues();
    const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    out.discrepancy = std::sqrt(std::max(0.0, 1.0 - smin * smin));
  }

  // Sampled bound for |marked coordinate| / ||point|| over the zero cone:
  // slice at unit base directions and record the worst ratio.
  if (d >= 2) {
    Rng rng;
    for (int it = 0; it < 64; ++it) {
      Vec u = rng.unit_vector(d - 1);
      std::vector<cplx> a = slice_coefficients(q.p, base, u, om);
      for (cplx r : poly_roots(a)) {
        const double denom = std::sqrt(1.0 + std::norm(r));
        out.cone_bound = std::max(out.cone_bound, std::abs(r) / denom);
      }
    }
  }
  out.within_cone_bound =
      out.root_ratio_max <= std::min(0.999, out.cone_bound + 0.05);
  return out;
}

GleasonResult gleason_decompose(const QuotientModel& q,
                                const std::vector<int>& base, const Vec& t,
                                const Vec& f) {
  check_base_set(q.p.dim(), base, t);
  const int qdim = q.dim();
  if (f.size() != qdim) throw validation_error("coordinate length mismatch");
  GleasonResult out;
  if (base.empty()) {
    out.residual = f.norm();
    return out;
  }
  const int nb = static_cast<int>(base.size());
  Mat A(qdim, nb * qdim);
  for (int i = 0; i < nb; ++i)
    A.middleCols(i * qdim, qdim) =
        q.shifts[base[i]] - t(i) * Mat::Identity(qdim, qdim);
  Vec x = A.completeOrthogonalDecomposition().solve(f);
  out.residual = (f - A * x).norm();
  for (int i = 0; i < nb; ++i) out.h.push_back(x.segment(i * qdim, qdim));
  return out;
}

MetricCurvatureResult metric_curvature(cplx lambda, cplx mu, double step,
                                       int N, bool richardson) {
  if (std::abs(lambda - mu) < 1e-12)
    throw validation_error("frame degenerates for equal parameters");
  if (std::abs(lambda) < 1e-12 || std::abs(mu) < 1e-12)
    throw validation_error("frame parameters must be nonzero");
  if (std::max(std::abs(lambda), std::abs(mu)) > 2.0)
    throw validation_error("frame parameters too large for the sampled disc");
  if (step < 1e-5 || step > 1e-2)
    throw validation_error("step outside [1e-5, 1e-2]");
  if (N < 2) throw validation_error("truncation degree too small");

  MetricCurvatureResult out;
  out.H_closed = [lambda, mu](cplx z) { return example_metric(lambda, mu, z); };
  out.H_gram = [lambda, mu, N](cplx z) {
    auto [phi1, phi2] = example_frame(lambda, mu, std::conj(z), N);
    Mat H(2, 2);
    H(0, 0) = phi1.inner(phi1);
    H(0, 1) = phi2.inner(phi1);
    H(1, 0) = phi1.inner(phi2);
    H(1, 1) = phi2.inner(phi2);
    return H;
  };
  out.h0 = out.H_closed(cplx(0.0)).determinant().real();

  const auto logdet = [&out](cplx z) {
    const double det = out.H_gram(z).determinant().real();
    if (det <= 0.0) throw degeneracy_error("metric lost positivity");
    return std::log(det);
  };
  const auto stencil = [&logdet](double h) {
    const double f0 = logdet(cplx(0.0));
    const double cx =
        (-logdet(cplx(2 * h, 0)) + 16 * logdet(cplx(h, 0)) - 30 * f0 +
         16 * logdet(cplx(-h, 0)) - logdet(cplx(-2 * h, 0))) /
        (12 * h * h);
    const double cy =
        (-logdet(cplx(0, 2 * h)) + 16 * logdet(cplx(0, h)) - 30 * f0 +
         16 * logdet(cplx(0, -h)) - logdet(cplx(0, -2 * h))) /
        (12 * h * h);
    return 0.25 * (cx + cy);
  };
  out.curvature_at_0 =
      richardson ? (16.0 * stencil(step / 2) - stencil(step)) / 15.0
                 : stencil(step);

  for (double x : {-0.21, -0.105, 0.0, 0.105, 0.21})
    for (double y : {-0.21, -0.105, 0.0, 0.105, 0.21}) {
      const cplx z(x, y);
      out.cross_check_error = std::max(
          out.cross_check_error, (out.H_closed(z) - out.H_gram(z)).norm());
    }
  return out;
}

IrreducibilityResult irreducibility_check(
    cplx lambda, cplx mu, const std::vector<std::pair<cplx, cplx>>& samples) {
  if (std::abs(lambda - mu) < 1e-12)
    throw validation_error("kernel normalization degenerates for equal parameters");
  if (samples.size() < 2)
    throw validation_error("need at least two sample pairs");

  const double bound = std::max({1.0 + std::norm(lambda), 1.0 + std::norm(mu),
                                 std::abs(1.0 + lambda * std::conj(mu))});
  for (const auto& [z, w] : samples)
    if (bound * std::abs(z) * std::abs(w) > 0.9)
      throw validation_error("sample pair outside the admissible region");

  const double dm = std::abs(lambda - mu);
  const Mat dinv = (Mat(2, 2) << 1.0, 0.0, 0.0, 1.0 / dm).finished();
  const auto khat = [&](cplx z, cplx w) {
    const Mat k0zw = dinv * example_kernel(lambda, mu, z, w) * dinv;
    const Mat k0z0 = dinv * example_kernel(lambda, mu, z, cplx(0.0)) * dinv;
    const Mat k00w = dinv * example_kernel(lambda, mu, cplx(0.0), w) * dinv;
    return Mat(k0z0.inverse() * k0zw * k00w.inverse());
  };

  // Null space of the stacked commutator constraints X M = M X, with X
  // vectorized column-major: rows are kron(M^T, I) - kron(I, M).
  const auto commutant_dim = [&](size_t count) {
    Mat stack(4 * static_cast<int>(count), 4);
    for (size_t s = 0; s < count; ++s) {
      const Mat M = khat(samples[s].first, samples[s].second);
      Mat row = Mat::Zero(4, 4);
      for (int rb = 0; rb < 2; ++rb)
        for (int cb = 0; cb < 2; ++cb) {
          row.block(2 * rb, 2 * cb, 2, 2) =
              M(cb, rb) * Mat::Identity(2, 2) -
              (rb == cb ? M : Mat(Mat::Zero(2, 2)));
        }
      stack.middleRows(4 * static_cast<int>(s), 4) = row;
    }
    Eigen::JacobiSVD<Mat> svd(stack);
    const auto& sv = svd.singularValues();
    const double thresh =
        (sv.size() ? sv(0) : 0.0) * std::max<int>(stack.rows(), 4) * 1e-12;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > thresh) ++rank;
    return 4 - rank;
  };

  IrreducibilityResult out;
  out.commutant_dimension = commutant_dim(samples.size());
  const int half_dim = commutant_dim((samples.size() + 1) / 2);
  out.degenerate_samples = half_dim != out.commutant_dimension;
  out.irreducible = out.commutant_dimension == 1;
  out.conclusive = std::abs(lambda) > 1e-9 &&
                   std::abs(1.0 + lambda * std::conj(mu)) > 1e-9;

  const Mat curv = metric_curvature_matrix(
      [lambda, mu](cplx z) { return example_metric(lambda, mu, z); }, 1e-3);
  out.second_derivative_diagonal =
      Eigen::Vector2d(curv(0, 0).real(), curv(1, 1).real());
  return out;
}

}  // namespace pickgrass
