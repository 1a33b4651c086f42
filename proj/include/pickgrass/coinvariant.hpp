#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pickgrass/ball.hpp"
#include "pickgrass/blaschke.hpp"
#include "pickgrass/drury_arveson.hpp"
#include "pickgrass/spectra.hpp"
#include "pickgrass/types.hpp"

namespace pickgrass {

// Formal combination sum_alpha c_alpha k_lambda^(alpha) shared by one base
// point; a model is a direct sum of such groups.
struct ModelGroup {
  BallPoint point;
  std::vector<std::map<MultiIndex, cplx>> vectors;  // coefficient maps
};

struct CoinvariantModel {
  int d = 0;
  std::vector<ModelGroup> groups;
  Mat gram;  // over the flattened basis, group-major order

  int dim() const;
};

// Computes the Gram matrix from exact kernel inner products.
CoinvariantModel make_model(int d, std::vector<ModelGroup> groups);

// <v, w> for combinations of derivative kernels at two base points.
cplx model_inner(const Vec& lam, const std::map<MultiIndex, cplx>& v,
                 const Vec& mu, const std::map<MultiIndex, cplx>& w);

struct ValidationReport {
  bool valid = true;
  std::string witness;  // first violated inclusion, empty when valid
};

// Checks per group: span closure under all d lowering maps
// k^(a) -> conj(l_j) k^(a) + a_j k^(a - e_j), membership of the plain kernel,
// linear independence; plus distinct base points and a positive definite Gram.
ValidationReport validate_coinvariant_model(const CoinvariantModel& m);

// Exact matrices of M_{z_j}^* restricted to the span, in the model basis
// (block diagonal over groups; no truncation involved).
std::vector<Mat> lowering_matrices(const CoinvariantModel& m);

struct PsiResult {
  JointSpectrumResult spectrum;
  bool gram_warning = false;   // condition number above 1e10
  double gram_condition = 0.0;
};

// psi(model) = joint spectrum of the compression tuple A_j = G^{-1} C_j^* G
// (the matrix of P M_{z_j}|_{PH} in the model basis); an orthonormalized
// similar tuple is used instead when the Gram is ill-conditioned.
PsiResult psi(const CoinvariantModel& m, std::uint64_t seed = kDefaultSeed);

struct PhiResult {
  std::optional<BlaschkeChain> chain;        // d >= 2
  std::optional<ClassicalProduct> product;   // d = 1
  CoinvariantModel model;                    // kernel span of the complement
};

// phi(X): the vanishing inner function plus the model of its complement.
// d >= 2 requires X multiplicity-free; d = 1 admits multiplicities through
// derivative kernels.
PhiResult phi(const Divisor& X);

// max |(1 - b(z) b(w)^*) k(z,w) - k_P(z,w)| over the sample pairs, where b
// is the vanishing inner function of `f` (chain or scalar product) and P
// projects onto its complement model span. Extends the chain-based check to
// one-variable products with multiplicities, whose complement spans involve
// derivative kernels.
double kernel_identity_error(const PhiResult& f,
                             const std::vector<std::pair<Vec, Vec>>& samples);

// Projection onto the model span inside the truncation at degree N, in the
// orthonormal monomial basis (used only for norm-topology experiments).
Mat truncated_projection(const CoinvariantModel& m, int N);

// Moves a kernel-span model (one plain kernel per group) by an automorphism;
// derivative-kernel models are unsupported.
CoinvariantModel aut_act(const CoinvariantModel& m, const BallAutomorphism& f);

}  // namespace pickgrass
