#pragma once

#include <vector>

#include "pickgrass/ball.hpp"
#include "pickgrass/types.hpp"

namespace pickgrass {

// Interpolation data on the ball: distinct nodes plus one target per node,
// either all complex scalars or all square matrices of a single size.
class PickProblem {
 public:
  PickProblem(std::vector<BallPoint> points, std::vector<cplx> targets);
  PickProblem(std::vector<BallPoint> points, std::vector<Mat> targets);

  int dim() const { return d_; }
  int n() const { return static_cast<int>(points_.size()); }
  bool matrix_mode() const { return matrix_mode_; }
  int block_size() const { return block_; }  // r in matrix mode, 1 otherwise

  const std::vector<BallPoint>& points() const { return points_; }
  const std::vector<cplx>& scalar_targets() const { return scalar_targets_; }
  const std::vector<Mat>& matrix_targets() const { return matrix_targets_; }

 private:
  int d_ = 0;
  int block_ = 1;
  bool matrix_mode_ = false;
  std::vector<BallPoint> points_;
  std::vector<cplx> scalar_targets_;
  std::vector<Mat> matrix_targets_;

  void check_points() const;
};

struct PickMatrixResult {
  Mat matrix;             // (n*r) x (n*r), Hermitian
  double min_eigenvalue;
  bool feasible;          // min eigenvalue >= -1e-10
  bool marginal;          // |min eigenvalue| <= 1e-10: on the boundary, where
                          // the sign of rounding decides the boolean
};

// Block matrix with (i,j) block (I - W_i W_j^*) * k(l_i, l_j) for the
// reproducing kernel k; positivity is the solvability criterion for
// contractive multiplier interpolation.
PickMatrixResult pick_matrix(const PickProblem& p);

// Moves the first point to the origin by a Moebius involution, then returns
// the rank of g(i,j) = 1 - 1/k(y_i, y_j) over the moved points: the smallest
// dimension of a ball whose kernel restricts to the configuration.
int embedding_dimension(const std::vector<BallPoint>& points);

// Rank of the difference matrix [l_1 - l_n | ... | l_{n-1} - l_n]: the
// dimension of the affine span, i.e. the least m with the configuration in
// the closed stratum of affine rank m. Multiplicity-free, n >= 2.
int stratum(const Divisor& X);

// True iff all pairwise pseudohyperbolic distances are pairwise distinct
// beyond 1e-10 (points repeated by multiplicity count as coincident pairs).
bool is_regular(const Divisor& X);

}  // namespace pickgrass
