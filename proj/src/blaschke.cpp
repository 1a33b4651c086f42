#include "pickgrass/blaschke.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace pickgrass {

namespace {

// Unitary with prescribed unit first column v: phase-aligned Householder
// reflection (deterministic completion).
Mat unitary_with_first_column(const Vec& v) {
  const int n = static_cast<int>(v.size());
  const cplx v0 = v(0);
  const double theta = (v0 == cplx(0.0)) ? 0.0 : std::arg(v0);
  const cplx phase = std::polar(1.0, theta);
  Vec w = v / phase;  // first entry now real and >= 0
  Vec u = -w;
  u(0) += 1.0;        // u = e_1 - w
  const double uu = u.squaredNorm();
  if (uu < 1e-30) return phase * Mat::Identity(n, n);
  Mat H = Mat::Identity(n, n) - (2.0 / uu) * (u * u.adjoint());
  return phase * H;
}

// Row evaluation of the first m points of the chain at z.
Eigen::RowVectorXcd evaluate_prefix(const BlaschkeChain& b, int m, const Vec& z) {
  Eigen::RowVectorXcd row = mobius_involution(b.base[0].coords(), z).transpose();
  for (int k = 2; k <= m; ++k) {
    row = row * b.steps[k - 2];
    Vec phi = mobius_involution(b.base[k - 1].coords(), z);
    Eigen::RowVectorXcd next(row.size() - 1 + b.d);
    next.head(b.d) = row(0) * phi.transpose();
    next.tail(row.size() - 1) = row.tail(row.size() - 1);
    row = next;
  }
  return row;
}

}  // namespace

BlaschkeChain build_blaschke(const std::vector<BallPoint>& points,
                             bool allow_near_boundary) {
  if (points.empty()) throw validation_error("chain needs at least one point");
  const int d = points[0].dim();
  for (const BallPoint& p : points) {
    if (p.dim() != d) throw validation_error("chain points dimension mismatch");
    if (!p.inside()) throw validation_error("chain points must lie in the open ball");
    if (!allow_near_boundary && p.norm() > 0.95)
      throw validation_error(
          "chain point too close to the boundary (norm > 0.95); "
          "pass allow_near_boundary to override");
  }
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if ((points[i].coords() - points[j].coords()).norm() <= 1e-10)
        throw validation_error("chain points must be pairwise distinct");

  BlaschkeChain b;
  b.d = d;
  b.base = points;
  for (int m = 2; m <= static_cast<int>(points.size()); ++m) {
    Eigen::RowVectorXcd f = evaluate_prefix(b, m - 1, points[m - 1].coords());
    const double fn = f.norm();
    if (fn < 1e-12)
      throw degeneracy_error("chain defining column vanished at a new point");
    Vec col = f.adjoint() / fn;  // normalized conjugate transpose
    b.steps.push_back(unitary_with_first_column(col));
  }
  return b;
}

Eigen::RowVectorXcd evaluate_blaschke(const BlaschkeChain& b, const Vec& z) {
  if (z.size() != b.d) throw validation_error("evaluation dimension mismatch");
  if (z.norm() >= 1.0) throw validation_error("evaluation point outside the open ball");
  return evaluate_prefix(b, b.n(), z);
}

ClassicalProduct classical_product(const Divisor& X) {
  if (X.dim() != 1) throw validation_error("classical product requires d = 1");
  ClassicalProduct p;
  for (auto& [pt, m] : X.points()) p.factors.emplace_back(pt.coords()(0), m);
  return p;
}

cplx evaluate_classical(const ClassicalProduct& p, cplx z) {
  cplx r = 1.0;
  for (auto& [l, m] : p.factors) {
    const cplx f = (l - z) / (1.0 - std::conj(l) * z);
    for (int i = 0; i < m; ++i) r *= f;
  }
  return r;
}

namespace {

struct SeriesWithTail {
  TruncVec s;
  double tail;  // sup-norm bound of the dropped part on the closed ball
};

// Truncated product with rigorous sup-norm tail propagation:
// tail(fg) <= l1(dropped cross terms) + l1(Tf) tail_g + tail_f l1(Tg)
//             + tail_f tail_g.
SeriesWithTail product(const SeriesWithTail& a, const SeriesWithTail&back) {
  const int N = a.s.degree_cap();
  TruncVec out(a.s.dim(), N);
  double dropped = 0.0;
  for (auto& [p, vp] : a.s.coeffs())
    for (auto& [q, vq] : back.s.coeffs()) {
      if (p.total() + q.total() > N) {
        dropped += std::abs(vp * vq);
        continue;
      }
      out.set_coeff(p + q, out.coeff(p + q) + vp * vq);
    }
  double tail = dropped + a.s.l1() * back.tail + a.tail * back.s.l1() +
                a.tail * back.tail;
  return {std::move(out), tail};
}

}  // namespace

ExpandedRow mobius_expansion(const Vec& lambda, int N) {
  const int d = static_cast<int>(lambda.size());
  if (N < 1) throw validation_error("degree cap must be at least 1");
  const double ln = lambda.norm();
  if (ln >= 1.0) throw validation_error("expansion base point outside the open ball");

  // phi_j(z) = (lambda_j - (A z)_j) / (1 - <z, lambda>) with
  // A = P + sqrt(1-|l|^2)(I - P), P = projection onto span{lambda};
  // lambda = 0 reduces to phi = -z.
  Mat A;
  if (ln == 0.0) {
    A = Mat::Identity(d, d);
  } else {
    Mat P = (lambda * lambda.adjoint()) / lambda.squaredNorm();
    A = P + std::sqrt(1.0 - lambda.squaredNorm()) * (Mat::Identity(d, d) - P);
  }

  // Geometric series of the shared denominator.
  TruncVec lin(d, N);  // <z, lambda> = sum_i conj(lambda_i) z_i
  for (int i = 0; i < d; ++i)
    if (lambda(i) != cplx(0.0))
      lin.set_coeff(MultiIndex::unit(d, i), std::conj(lambda(i)));
  TruncVec geom(d, N), pw(d, N);
  pw.set_coeff(MultiIndex(d), 1.0);
  geom = pw;
  for (int k = 1; k <= N; ++k) {
    pw = pw * lin;
    geom = geom + pw;
  }
  const double geom_tail = (ln == 0.0) ? 0.0 : std::pow(ln, N + 1) / (1.0 - ln);
  SeriesWithTail g{geom, geom_tail};

  ExpandedRow out;
  for (int j = 0; j < d; ++j) {
    TruncVec num(d, N);
    if (lambda(j) != cplx(0.0)) num.set_coeff(MultiIndex(d), lambda(j));
    for (int i = 0; i < d; ++i)
      if (A(j, i) != cplx(0.0))
        num.set_coeff(MultiIndex::unit(d, i), num.coeff(MultiIndex::unit(d, i)) - A(j, i));
    SeriesWithTail phi = product({num, 0.0}, g);
    out.comp.push_back(std::move(phi.s));
    out.tails.push_back(phi.tail);
  }
  return out;
}

ExpandedRow expand_blaschke(const BlaschkeChain& b, int N) {
  if (N < 1) throw validation_error("degree cap must be at least 1");
  ExpandedRow row = mobius_expansion(b.base[0].coords(), N);
  for (int m = 2; m <= b.n(); ++m) {
    const Mat& U = b.steps[m - 2];
    const int w = static_cast<int>(row.comp.size());
    // row . U
    std::vector<TruncVec> mixed(w, TruncVec(b.d, N));
    std::vector<double> mtails(w, 0.0);
    for (int j = 0; j < w; ++j) {
      for (int i = 0; i < w; ++i) {
        if (U(i, j) == cplx(0.0)) continue;
        mixed[j] = mixed[j] + row.comp[i] * U(i, j);
        mtails[j] += row.tails[i] * std::abs(U(i, j));
      }
    }
    // splice: first entry times the new Moebius factor, rest pass through
    ExpandedRow phim = mobius_expansion(b.base[m - 1].coords(), N);
    ExpandedRow next;
    for (int k = 0; k < b.d; ++k) {
      SeriesWithTail prod = product({mixed[0], mtails[0]}, {phim.comp[k], phim.tails[k]});
      next.comp.push_back(std::move(prod.s));
      next.tails.push_back(prod.tail);
    }
    for (int i = 1; i < w; ++i) {
      next.comp.push_back(std::move(mixed[i]));
      next.tails.push_back(mtails[i]);
    }
    row = std::move(next);
  }
  return row;
}

TruncatedMultiplier truncated_multiplier_matrix(const BlaschkeChain& b, int N) {
  ExpandedRow row = expand_blaschke(b, N);
  TruncatedMultiplier out;
  out.ctx = BasisContext(b.d, N);
  for (const TruncVec& c : row.comp)
    out.blocks.push_back(multiplication_matrix(c, out.ctx));
  out.tails = row.tails;
  return out;
}

Mat kernel_span_gram(const std::vector<BallPoint>& points) {
  std::vector<SpaceVector> vs;
  for (const BallPoint& p : points)
    vs.emplace_back(KernelDescriptor{p.coords(), MultiIndex(p.dim())});
  return gram_matrix(vs);
}

cplx projected_kernel(const std::vector<BallPoint>& points, const Vec& z,
                      const Vec& w) {
  const int n = static_cast<int>(points.size());
  Mat G = kernel_span_gram(points);
  Vec u(n), v(n);
  const MultiIndex zero(static_cast<int>(z.size()));
  for (int i = 0; i < n; ++i) {
    u(i) = kernel_derivative_eval(zero, zero, z, points[i].coords());  // k(z, l_i)
    v(i) = kernel_derivative_eval(zero, zero, points[i].coords(), w);  // k(l_i, w)
  }
  // sum_ij u_i (G^{-1})_{ij} v_j
  Vec x = G.colPivHouseholderQr().solve(v);
  return (u.transpose() * x)(0);
}

double kernel_identity_error(const BlaschkeChain& b,
                             const std::vector<std::pair<Vec, Vec>>& samples) {
  double worst = 0.0;
  const MultiIndex zero(b.d);
  for (auto& [z, w] : samples) {
    Eigen::RowVectorXcd bz = evaluate_blaschke(b, z);
    Eigen::RowVectorXcd bw = evaluate_blaschke(b, w);
    cplx k = kernel_derivative_eval(zero, zero, z, w);
    cplx bzw = (bz * bw.adjoint())(0);  // b(z) b(w)^*
    cplx lhs = (cplx(1.0) - bzw) * k;
    cplx rhs = projected_kernel(b.base, z, w);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace pickgrass
