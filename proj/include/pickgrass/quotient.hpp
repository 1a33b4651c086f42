#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "pickgrass/drury_arveson.hpp"
#include "pickgrass/types.hpp"

namespace pickgrass {

// ---------------------------------------------------------------------------
// Quotients of the d-variable symmetric Fock space by a homogeneous principal
// ideal: H_p = (polynomials) minus p * (polynomials), the compressed
// coordinate multiplications on it, its point fibers, and the rank-two
// Hermitian metric attached to the plane-curve example
// p = (z_1 - lambda z_2)(z_1 - mu z_2).
// ---------------------------------------------------------------------------

// Homogeneous polynomial in d variables. One coordinate axis is marked: the
// pure power of that coordinate must carry a nonzero coefficient, so that
// one-variable slices in the marked coordinate keep full degree and the
// zero set meets no neighborhood of that axis.
class HomogPoly {
 public:
  // axis = -1 marks the last coordinate. Indices are 0-based. Every stored
  // multi-index must have total degree exactly `degree`.
  HomogPoly(int d, int degree, std::map<MultiIndex, cplx> coefficients,
            int axis = -1);

  int dim() const { return d_; }
  int degree() const { return n_; }
  int axis() const { return axis_; }
  const std::map<MultiIndex, cplx>& coeffs() const { return c_; }

  cplx evaluate(const Vec& z) const;

 private:
  int d_ = 0;
  int n_ = 0;
  int axis_ = 0;
  std::map<MultiIndex, cplx> c_;
};

// Truncation of the quotient at total degree N. The basis matrix holds
// orthonormal coordinates (degree block by degree block) of a basis of the
// orthogonal complement of p * {deg <= N-n} inside {deg <= N}; shifts[j] is
// the compression of multiplication by z_j to that complement.
struct QuotientModel {
  HomogPoly p;
  int N = 0;
  BasisContext ctx;
  Mat basis;                      // ctx.dim() x q, orthonormal columns
  std::vector<Mat> shifts;        // d compressed multiplications, q x q
  std::vector<int> graded_dims;   // model dimension per total degree 0..N

  int dim() const { return static_cast<int>(basis.cols()); }
  // First model coordinate of total degree m (columns are degree-sorted).
  int degree_offset(int m) const;
};

// Build the truncated quotient model. Requires N >= deg p.
QuotientModel compress(const HomogPoly& p, int N);

// Coordinates of the orthogonal projection of f in the model basis.
Vec model_coords(const QuotientModel& q, const TruncVec& f);
// The polynomial realized by model coordinates x (the basis lift).
TruncVec model_lift(const QuotientModel& q, const Vec& x);

// Joint eigenspace of the adjoint shifts over a base point, computed two
// ways: numerically as a null space of the stacked shifted adjoints, and
// exactly as derivative kernels at the points completing the base value by
// the roots of the one-variable slice of p.
struct FiberResult {
  Mat numeric_basis;                      // model coordinates, orthonormal
  std::vector<SpaceVector> exact_basis;   // derivative kernels, one per root
  std::vector<std::pair<Vec, int>> points;  // completed point, multiplicity
  int dimension = 0;                      // numeric null-space dimension
  double discrepancy = 0.0;               // sine of largest principal angle
  double root_ratio_max = 0.0;  // max |marked coordinate| / ||point||
  double cone_bound = 0.0;      // sampled sup of that ratio on the zero cone
  bool within_cone_bound = true;
};

// base lists the d-1 coordinates (0-based) given values t; the omitted
// coordinate is solved for. Throws if p degenerates in the omitted
// coordinate or a completed point leaves 0.99 * (unit ball).
FiberResult fiber(const QuotientModel& q, const std::vector<int>& base,
                  const Vec& t);

// Least-squares membership test for the range of the shifted inclusion
// f = sum_j (S_j - t_j) h_j over the base coordinates.
struct GleasonResult {
  std::vector<Vec> h;      // one model-coordinate vector per base coordinate
  double residual = 0.0;   // || f - sum (S_j - t_j) h_j ||
};

GleasonResult gleason_decompose(const QuotientModel& q,
                                const std::vector<int>& base, const Vec& t,
                                const Vec& f);

// Rank-two Hermitian metric of the plane-curve example over the base disc:
// the closed form and the Gram-of-frame pathway, with the curvature of
// log det H at the origin by central finite differences.
struct MetricCurvatureResult {
  std::function<Mat(cplx)> H_closed;  // closed-form metric sample
  std::function<Mat(cplx)> H_gram;    // frame Gram via truncated expansions
  double h0 = 0.0;                    // det H(0)
  double curvature_at_0 = 0.0;        // d d-bar log det H at z = 0
  double cross_check_error = 0.0;     // max ||H_closed - H_gram|| on a grid
};

// Requires lambda != mu, both nonzero, |lambda|,|mu| <= 2 and
// step in [1e-5, 1e-2]. N is the truncation degree of the Gram pathway.
// With richardson = true the stencil is evaluated at step and step/2 and
// extrapolated.
MetricCurvatureResult metric_curvature(cplx lambda, cplx mu,
                                       double step = 1e-3, int N = 60,
                                       bool richardson = false);

// Commutant test for the normalized kernel family of the same example:
// solves X K(z_i, w_i) = K(z_i, w_i) X over 2x2 X for all sample pairs.
struct IrreducibilityResult {
  int commutant_dimension = 0;   // 1 = scalars only
  bool irreducible = false;      // commutant_dimension == 1
  bool conclusive = true;        // false in the known blind-spot regimes
  bool degenerate_samples = false;  // dimension changed as samples were added
  Eigen::Vector2d second_derivative_diagonal;  // curvature diagonal at 0
};

// Requires lambda != mu and at least two sample pairs, each inside the
// admissible disc of the kernel formulas. lambda = 0 or 1 + lambda*conj(mu)
// = 0 yield conclusive = false (the off-diagonal entries the test relies on
// vanish identically there).
IrreducibilityResult irreducibility_check(
    cplx lambda, cplx mu, const std::vector<std::pair<cplx, cplx>>& samples);

}  // namespace pickgrass
