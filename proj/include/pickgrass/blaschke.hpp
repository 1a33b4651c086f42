#pragma once

#include <utility>
#include <vector>

#include "pickgrass/ball.hpp"
#include "pickgrass/drury_arveson.hpp"
#include "pickgrass/types.hpp"

namespace pickgrass {

// Row-valued inner function vanishing exactly on an ordered point list,
// built inductively: F_1 = phi_{l_1},
// F_m = F_{m-1} . U_m . diag(phi_{l_m}, I_{(m-1)(d-1)}).
// Step unitary U_m has size (m-1)(d-1)+1 and first column equal to the
// normalized conjugate transpose of F_{m-1}(l_m).
struct BlaschkeChain {
  int d = 0;
  std::vector<BallPoint> base;  // pairwise distinct
  std::vector<Mat> steps;       // steps[m-2] = U_m for m = 2..n

  int n() const { return static_cast<int>(base.size()); }
  int width() const { return (n() - 1) * (d - 1) + d; }
};

// Near-boundary points (norm > 0.95) are rejected unless explicitly allowed:
// truncation tails degrade sharply there.
BlaschkeChain build_blaschke(const std::vector<BallPoint>& points,
                             bool allow_near_boundary = false);

Eigen::RowVectorXcd evaluate_blaschke(const BlaschkeChain& b, const Vec& z);

// Scalar product prod ((z - l_j)/(1 - conj(l_j) z))^{m_j} for d = 1, the
// form that accommodates multiplicities.
struct ClassicalProduct {
  std::vector<std::pair<cplx, int>> factors;  // (zero, multiplicity)
};
ClassicalProduct classical_product(const Divisor& X);
cplx evaluate_classical(const ClassicalProduct& p, cplx z);

// Degree-N Taylor expansion of each chain component (exact coefficients;
// truncating factor products at N loses nothing below degree N+1) together
// with rigorous sup-norm tail bounds on the closed ball.
struct ExpandedRow {
  std::vector<TruncVec> comp;
  std::vector<double> tails;
};
ExpandedRow expand_blaschke(const BlaschkeChain& b, int N);

// Moebius involution components as truncated series: the shared denominator
// (1 - <z,l>)^{-1} is expanded geometrically; tail = |l|^{N+1}/(1-|l|).
ExpandedRow mobius_expansion(const Vec& lambda, int N);

struct TruncatedMultiplier {
  BasisContext ctx;
  std::vector<Mat> blocks;     // multiplication matrix per component
  std::vector<double> tails;   // sup-norm tail bound per component
};
TruncatedMultiplier truncated_multiplier_matrix(const BlaschkeChain& b, int N);

// Gram matrix G(i,j) = k(l_i, l_j) of the kernels at the given points.
Mat kernel_span_gram(const std::vector<BallPoint>& points);

// k_P(z,w) = sum_ij k(z,l_i) (G^{-1})_{ij} k(l_j,w): the reproducing kernel
// of the span of {k_{l_i}}.
cplx projected_kernel(const std::vector<BallPoint>& points, const Vec& z,
                      const Vec& w);

// max |(1 - b(z) b(w)^*) k(z,w) - k_P(z,w)| over the given sample pairs.
double kernel_identity_error(const BlaschkeChain& b,
                             const std::vector<std::pair<Vec, Vec>>& samples);

}  // namespace pickgrass
