#pragma once

#include <cstdint>
#include <vector>

#include "pickgrass/ball.hpp"
#include "pickgrass/rng.hpp"
#include "pickgrass/types.hpp"

namespace pickgrass {

// Tuple A = (A_1, ..., A_d) of commuting K x K matrices.
class CommutingTuple {
 public:
  CommutingTuple(std::vector<Mat> matrices);

  int d() const { return static_cast<int>(A_.size()); }
  int size() const { return static_cast<int>(A_[0].rows()); }  // ambient K
  const Mat& operator[](int j) const { return A_[j]; }
  const std::vector<Mat>& matrices() const { return A_; }

  // max_{i<j} ||A_i A_j - A_j A_i|| (operator norm), scaled by column norm.
  double commutation_defect() const { return defect_; }

 private:
  std::vector<Mat> A_;
  double defect_;
};

// ||A||_col = || sum_j A_j^* A_j ||^(1/2).
double column_norm(const CommutingTuple& A);
double column_norm_diff(const CommutingTuple& A, const CommutingTuple& B);

// Orthonormal basis of the joint root subspace
//   R_lambda(A) = intersection of ker (A - lambda)^alpha over |alpha| = K,
// returned as a K x m matrix with orthonormal columns (m = 0 if lambda is
// not a joint eigenvalue). `power` overrides the exponent total K (the
// ambient size); any power >= the algebraic multiplicity gives the same
// subspace, and small powers keep the rank decision well-scaled.
Mat root_subspace(const CommutingTuple& A, const Vec& lambda, int power = -1);

struct JointSpectrumResult {
  Divisor divisor;            // multiplicities = root-subspace dimensions
  bool degenerate = false;    // two clusters closer than twice the radius
  bool outside_ball = false;  // some point fell outside the closed unit ball
  int retries = 0;            // scalarizing directions consumed beyond the first
};

// Joint spectrum with multiplicities via a random scalarization c . A:
// Schur form, diagonal clustering, contiguous reordering, block traces.
// Cluster sizes are verified against root-subspace dimensions; on mismatch a
// fresh direction is drawn (up to 8), then a degeneracy error is raised.
JointSpectrumResult joint_spectrum(const CommutingTuple& A,
                                   std::uint64_t seed = kDefaultSeed);

struct PerturbationCheck {
  double hausdorff = 0.0;   // between spectra as point sets
  double matching = 0.0;    // optimal matching distance with multiplicity
  double bound = 0.0;       // n^(1/n) (2M)^(1-1/n) ||A-B||_col^(1/n)
  bool holds = false;       // hausdorff <= bound + 1e-10
};

// Elsner-type continuity bound for two commuting tuples of equal shape.
PerturbationCheck spectral_perturbation_check(const CommutingTuple& A,
                                              const CommutingTuple& B,
                                              std::uint64_t seed = kDefaultSeed);

namespace detail {
// Reorder a complex Schur form so that the diagonal entries listed in
// `order` (a permutation of 0..n-1 by current position) become contiguous in
// that order; T and Q are updated in place by adjacent Givens swaps.
void reorder_schur(Mat& T, Mat& Q, const std::vector<int>& target_order);
// Single-linkage clusters of complex values at the given radius; returns the
// cluster label of each value.
std::vector<int> cluster_values(const std::vector<cplx>& vals, double radius);
}  // namespace detail

}  // namespace pickgrass
