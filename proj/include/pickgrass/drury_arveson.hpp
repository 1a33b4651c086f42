#pragma once

#include <map>
#include <variant>
#include <vector>

#include "pickgrass/ball.hpp"
#include "pickgrass/types.hpp"

namespace pickgrass {

// ---------------------------------------------------------------------------
// The reproducing kernel k(z,w) = 1/(1 - <z,w>) on the unit ball of C^d, with
// the Bombieri inner product <z^a, z^b> = delta_ab * a!/|a|! on polynomials.
// Derivative kernels k_l^(a)(z) = |a|! z^a / (1 - <z,l>)^{|a|+1} represent
// the functionals f -> (d^a f)(l).
// ---------------------------------------------------------------------------

// Exact evaluation of d_z^beta d_wbar^alpha k at (z, w):
//   <k_w^(alpha), k_z^(beta)> when fed the two kernels' parameters.
// Computed symbolically as a sum of terms c * z^a * conj(w)^b * u^-m with
// u = 1 - <z,w>, so results are exact up to rounding.
cplx kernel_derivative_eval(const MultiIndex& alpha, const MultiIndex& beta,
                            const Vec& z, const Vec& w);

// <k_lambda^(alpha), k_mu^(beta)> in the space (not pointwise evaluation).
cplx derivative_kernel_inner(const MultiIndex& alpha, const Vec& lambda,
                             const MultiIndex& beta, const Vec& mu);

// Monomial basis bookkeeping for the truncation at total degree N.
struct BasisContext {
  int d = 0;
  int N = 0;
  std::vector<MultiIndex> indices;      // graded order
  std::map<MultiIndex, int> index_of;

  BasisContext() = default;
  BasisContext(int d_, int N_);
  int dim() const { return static_cast<int>(indices.size()); }
  int degree_offset(int m) const;       // first index of total degree m
  int degree_count(int m) const;        // number of indices of total degree m
};

// Polynomial of degree <= N in d variables, stored by monomial coefficients
// (c_a for z^a). Inner products use the Bombieri weights.
class TruncVec {
 public:
  TruncVec(int d, int N) : d_(d), N_(N) {}
  TruncVec(int d, int N, std::map<MultiIndex, cplx> c);

  int dim() const { return d_; }
  int degree_cap() const { return N_; }
  const std::map<MultiIndex, cplx>& coeffs() const { return c_; }

  cplx coeff(const MultiIndex& a) const;
  void set_coeff(const MultiIndex& a, cplx v);

  TruncVec operator+(const TruncVec& o) const;
  TruncVec operator-(const TruncVec& o) const;
  TruncVec operator*(cplx s) const;
  // Product truncated at the common degree cap.
  TruncVec operator*(const TruncVec& o) const;

  cplx inner(const TruncVec& o) const;  // <*this, o>, conjugate-linear in o
  double norm_sq() const;
  double norm() const { return std::sqrt(norm_sq()); }
  double l1() const;                    // sum |c_a|; sup bound on closed ball

  cplx evaluate(const Vec& z) const;
  cplx derivative_at(const MultiIndex& beta, const Vec& z) const;

  // Coordinates in the orthonormal basis e_a = sqrt(|a|!/a!) z^a.
  Vec orthonormal_coords(const BasisContext& ctx) const;
  static TruncVec from_orthonormal_coords(const BasisContext& ctx, const Vec& v);

 private:
  int d_, N_;
  std::map<MultiIndex, cplx> c_;
  void prune(const MultiIndex& a);
};

// Truncated expansion of a derivative kernel plus the exact tail norm
// || k_lambda^(alpha) - T_N k_lambda^(alpha) ||.
struct KernelExpansion {
  TruncVec series;
  double tail_norm = 0.0;
};
KernelExpansion kernel_coefficients(const Vec& lambda, const MultiIndex& alpha,
                                    int N);

// Matrix of multiplication by the polynomial f on the truncation, in the
// orthonormal basis, with products truncated at N.
Mat multiplication_matrix(const TruncVec& f, const BasisContext& ctx);
// Multiplication by the coordinate z_j (sparse shift), orthonormal basis.
Mat coordinate_mult_matrix(int j, const BasisContext& ctx);
// Apply coordinate multiplication / its adjoint without forming the matrix.
Vec apply_coordinate_mult(int j, const BasisContext& ctx, const Vec& v);
Vec apply_coordinate_mult_adjoint(int j, const BasisContext& ctx, const Vec& v);

// Vector of the (possibly infinite-dimensional) space given either exactly
// as a polynomial or symbolically as a derivative kernel.
struct KernelDescriptor {
  Vec point;          // inside the open ball
  MultiIndex alpha;   // derivative order (0 = plain kernel)
};
using SpaceVector = std::variant<TruncVec, KernelDescriptor>;

cplx space_inner(const SpaceVector& a, const SpaceVector& b);  // <a, b>
// G(i,j) = <v_j, v_i>: Gram matrix, Hermitian PSD, exact entries.
Mat gram_matrix(const std::vector<SpaceVector>& v);

}  // namespace pickgrass
