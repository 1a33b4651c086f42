#include "pickgrass/pick.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <utility>

namespace pickgrass {

namespace {

// <z, w> = sum_i z_i conj(w_i); Eigen's dot conjugates its *left* argument.
cplx ball_inner(const Vec& z, const Vec& w) { return w.dot(z); }

cplx kernel_value(const Vec& z, const Vec& w) {
  return 1.0 / (1.0 - ball_inner(z, w));
}

void require_same_dim(const std::vector<BallPoint>& pts) {
  if (pts.empty()) throw validation_error("pick problem needs at least one point");
  const int d = pts[0].dim();
  for (const BallPoint& p : pts)
    if (p.dim() != d) throw validation_error("points have mixed dimensions");
}

double min_eigenvalue_of(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> es((H + H.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

int numerical_rank(const Mat& M, int scale_count) {
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double thresh = sv(0) * scale_count * 1e-10;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > thresh) ++rank;
  return rank;
}

}  // namespace

void PickProblem::check_points() const {
  require_same_dim(points_);
  for (int i = 0; i < n(); ++i) {
    for (int j = i + 1; j < n(); ++j) {
      if ((points_[i].coords() - points_[j].coords()).norm() > 1e-12) continue;
      const double target_gap =
          matrix_mode_ ? (matrix_targets_[i] - matrix_targets_[j]).norm()
                       : std::abs(scalar_targets_[i] - scalar_targets_[j]);
      if (target_gap > 1e-12)
        throw validation_error("coincident points with conflicting targets");
      throw validation_error("pick problem requires distinct points");
    }
  }
}

PickProblem::PickProblem(std::vector<BallPoint> points, std::vector<cplx> targets)
    : matrix_mode_(false),
      points_(std::move(points)),
      scalar_targets_(std::move(targets)) {
  if (points_.size() != scalar_targets_.size())
    throw validation_error("pick problem needs one target per point");
  check_points();
  d_ = points_[0].dim();
}

PickProblem::PickProblem(std::vector<BallPoint> points, std::vector<Mat> targets)
    : matrix_mode_(true),
      points_(std::move(points)),
      matrix_targets_(std::move(targets)) {
  if (points_.size() != matrix_targets_.size())
    throw validation_error("pick problem needs one target per point");
  if (matrix_targets_.empty())
    throw validation_error("pick problem needs at least one point");
  const auto rows = matrix_targets_[0].rows();
  for (const Mat& W : matrix_targets_)
    if (W.rows() != rows || W.cols() != rows)
      throw validation_error("matrix targets must be square of equal size");
  if (rows < 1) throw validation_error("matrix targets must be nonempty");
  block_ = static_cast<int>(rows);
  check_points();
  d_ = points_[0].dim();
}

PickMatrixResult pick_matrix(const PickProblem& p) {
  const int n = p.n(), r = p.block_size();
  Mat P(n * r, n * r);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx k = kernel_value(p.points()[i].coords(), p.points()[j].coords());
      if (p.matrix_mode()) {
        const Mat& Wi = p.matrix_targets()[i];
        const Mat& Wj = p.matrix_targets()[j];
        P.block(i * r, j * r, r, r) = (Mat::Identity(r, r) - Wi * Wj.adjoint()) * k;
      } else {
        P(i, j) = (1.0 - p.scalar_targets()[i] * std::conj(p.scalar_targets()[j])) * k;
      }
    }
  }
  PickMatrixResult out;
  out.matrix = std::move(P);
  out.min_eigenvalue = min_eigenvalue_of(out.matrix);
  out.feasible = out.min_eigenvalue >= -1e-10;
  out.marginal = std::abs(out.min_eigenvalue) <= 1e-10;
  return out;
}

int embedding_dimension(const std::vector<BallPoint>& points) {
  require_same_dim(points);
  const int n = static_cast<int>(points.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((points[i].coords() - points[j].coords()).norm() <= 1e-12)
        throw validation_error("configuration has coincident points");
  if (n == 1) return 0;

  std::vector<Vec> y;
  for (const BallPoint& p : points)
    y.push_back(mobius_involution(points[0].coords(), p.coords()));
  // g(i,j) = 1 - 1/k(y_i, y_j) telescopes to <y_i, y_j>: a Gram matrix whose
  // rank is the dimension of span{y_i} (y_1 = 0, so this is the affine rank).
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = ball_inner(y[i], y[j]);
  return numerical_rank(g, n);
}

int stratum(const Divisor& X) {
  for (const auto& [p, m] : X.points())
    if (m != 1) throw validation_error("stratum requires a multiplicity-free divisor");
  const int n = X.support_size();
  if (n < 2) throw validation_error("stratum needs at least two points");
  const Vec& last = X.points()[n - 1].first.coords();
  Mat C(X.dim(), n - 1);
  for (int i = 0; i + 1 < n; ++i) C.col(i) = X.points()[i].first.coords() - last;
  return numerical_rank(C, n);
}

bool is_regular(const Divisor& X) {
  const std::vector<Vec> pts = X.expanded();
  const int n = static_cast<int>(pts.size());
  std::vector<double> dist;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      dist.push_back(pseudo_distance(pts[i], pts[j]));
  for (size_t a = 0; a < dist.size(); ++a)
    for (size_t b = a + 1; b < dist.size(); ++b)
      if (std::abs(dist[a] - dist[b]) <= 1e-10) return false;
  return true;
}

}  // namespace pickgrass
