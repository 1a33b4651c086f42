#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pickgrass/types.hpp"

namespace pickgrass {

// Point of the open unit ball of C^d (norm-checked unless explicitly not:
// spectral outputs may legitimately fall outside and carry a warning).
class BallPoint {
 public:
  explicit BallPoint(Vec coords) : x_(std::move(coords)) {
    if (x_.size() == 0) throw validation_error("ball point needs dimension >= 1");
    if (x_.norm() >= 1.0)
      throw validation_error("ball point has norm >= 1");
  }

  static BallPoint unchecked(Vec coords) {
    BallPoint p;
    p.x_ = std::move(coords);
    return p;
  }

  const Vec& coords() const { return x_; }
  int dim() const { return static_cast<int>(x_.size()); }
  double norm() const { return x_.norm(); }
  bool inside() const { return x_.norm() < 1.0; }

 private:
  BallPoint() = default;
  Vec x_;
};

// Finite formal sum of points with positive integer multiplicities.
// Canonical form: points within 1e-12 merged, sorted lexicographically by
// (Re x_1, Im x_1, Re x_2, ...).
class Divisor {
 public:
  Divisor(int d, std::vector<std::pair<BallPoint, int>> pts);

  int dim() const { return d_; }
  int degree() const;                       // total multiplicity
  int support_size() const { return static_cast<int>(pts_.size()); }
  const std::vector<std::pair<BallPoint, int>>& points() const { return pts_; }

  // Points repeated according to multiplicity (canonical order).
  std::vector<Vec> expanded() const;

  bool all_inside() const;

 private:
  int d_;
  std::vector<std::pair<BallPoint, int>> pts_;
};

// Unitary composed with a Moebius involution: z -> U * phi_base(z).
struct BallAutomorphism {
  Mat unitary;      // d x d, unitary to 1e-12
  BallPoint base;   // involution parameter

  BallAutomorphism(Mat U, BallPoint b);
  Vec operator()(const Vec& z) const;
  int dim() const { return base.dim(); }
};

// phi_lambda(z) = (lambda - P z - sqrt(1-|lambda|^2) (I-P) z) / (1 - <z,lambda>)
// with P the orthogonal projection onto span{lambda}; phi_0 = -id.
// Involution: phi_lambda(phi_lambda(z)) = z, phi_lambda(0) = lambda.
Vec mobius_involution(const Vec& lambda, const Vec& z);

// Pseudohyperbolic distance |phi_z(w)|; symmetric, invariant under
// automorphisms, and satisfies
//   1 - d(z,w)^2 = (1-|z|^2)(1-|w|^2) / |1 - <z,w>|^2.
double pseudo_distance(const Vec& z, const Vec& w);
inline double pseudo_distance(const BallPoint& z, const BallPoint& w) {
  return pseudo_distance(z.coords(), w.coords());
}

// Min over bijections of the max pairwise cost; divisors must have equal
// degree and dimension. Euclidean ground cost.
double optimal_matching_distance(const Divisor& a, const Divisor& b);
// Same bottleneck matching with pseudohyperbolic ground cost (requires all
// points strictly inside the ball).
double symmetric_distance(const Divisor& a, const Divisor& b);

Divisor apply_automorphism(const BallAutomorphism& f, const Divisor& X);

namespace detail {
// Bottleneck assignment value of a square cost matrix, by permutation
// enumeration (n <= 8) — used as oracle for the matching-based solver.
double bottleneck_bruteforce(const Eigen::MatrixXd& cost);
// Threshold + bipartite-matching bottleneck solver (any n).
double bottleneck_matching(const Eigen::MatrixXd& cost);
}  // namespace detail

}  // namespace pickgrass
