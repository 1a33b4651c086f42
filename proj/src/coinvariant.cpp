#include "pickgrass/coinvariant.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <set>

namespace pickgrass {

int CoinvariantModel::dim() const {
  int n = 0;
  for (const ModelGroup& g : groups) n += static_cast<int>(g.vectors.size());
  return n;
}

cplx model_inner(const Vec& lam, const std::map<MultiIndex, cplx>& v,
                 const Vec& mu, const std::map<MultiIndex, cplx>& w) {
  cplx s = 0.0;
  for (auto& [a, ca] : v)
    for (auto& [b, cb] : w)
      s += ca * std::conj(cb) * derivative_kernel_inner(a, lam, b, mu);
  return s;
}

CoinvariantModel make_model(int d, std::vector<ModelGroup> groups) {
  if (groups.empty()) throw validation_error("model needs at least one group");
  for (const ModelGroup& g : groups) {
    if (g.point.dim() != d) throw validation_error("group point dimension mismatch");
    if (g.vectors.empty()) throw validation_error("group needs at least one vector");
    for (auto& v : g.vectors) {
      if (v.empty()) throw validation_error("group vector is zero");
      for (auto& [a, c] : v)
        if (a.dim() != d) throw validation_error("coefficient index dimension mismatch");
    }
  }
  CoinvariantModel m;
  m.d = d;
  m.groups = std::move(groups);
  const int n = m.dim();
  m.gram = Mat(n, n);
  int col = 0;
  for (const ModelGroup& gj : m.groups)
    for (auto& vj : gj.vectors) {
      int row = 0;
      for (const ModelGroup& gi : m.groups)
        for (auto& vi : gi.vectors) {
          // G(i,j) = <v_j, v_i>
          m.gram(row, col) = model_inner(gj.point.coords(), vj,
                                         gi.point.coords(), vi);
          ++row;
        }
      ++col;
    }
  return m;
}

namespace {

// Lowering in coefficient space: (L_j c)_b = conj(l_j) c_b + (b_j + 1) c_{b+e_j}.
std::map<MultiIndex, cplx> lower(const std::map<MultiIndex, cplx>& c,
                                 const Vec& lam, int j) {
  std::map<MultiIndex, cplx> out;
  const cplx lj = std::conj(lam(j));
  for (auto& [a, v] : c) {
    if (lj != cplx(0.0)) out[a] += lj * v;
    if (a[j] > 0) out[a.minus(j)] += static_cast<double>(a[j]) * v;
  }
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == cplx(0.0)) ? out.erase(it) : std::next(it);
  return out;
}

struct GroupSolver {
  std::vector<MultiIndex> support;
  std::map<MultiIndex, int> row_of;
  Mat V;  // |support| x k coefficient matrix of the group's vectors
  Eigen::ColPivHouseholderQR<Mat> qr;

  explicit GroupSolver(const ModelGroup& g, int d) {
    std::set<MultiIndex> sup;
    sup.insert(MultiIndex(d));  // for the kernel-membership probe
    for (auto& v : g.vectors)
      for (auto& [a, c] : v) {
        sup.insert(a);
        for (int j = 0; j < d; ++j)
          if (a[j] > 0) sup.insert(a.minus(j));
      }
    support.assign(sup.begin(), sup.end());
    for (size_t i = 0; i < support.size(); ++i) row_of[support[i]] = static_cast<int>(i);
    V = Mat::Zero(static_cast<int>(support.size()),
                  static_cast<int>(g.vectors.size()));
    for (size_t c = 0; c < g.vectors.size(); ++c)
      for (auto& [a, v] : g.vectors[c]) V(row_of.at(a), static_cast<int>(c)) = v;
    qr.compute(V);
  }

  Vec embed(const std::map<MultiIndex, cplx>& c) const {
    Vec y = Vec::Zero(V.rows());
    for (auto& [a, v] : c) y(row_of.at(a)) = v;
    return y;
  }

  // Least-squares coordinates and relative residual of c against the span.
  std::pair<Vec, double> solve(const std::map<MultiIndex, cplx>& c) const {
    Vec y = embed(c);
    Vec x = qr.solve(y);
    double res = (V * x - y).norm() / std::max(1.0, y.norm());
    return {x, res};
  }
};

}  // namespace

ValidationReport validate_coinvariant_model(const CoinvariantModel& m) {
  for (size_t i = 0; i < m.groups.size(); ++i)
    for (size_t j = i + 1; j < m.groups.size(); ++j)
      if ((m.groups[i].point.coords() - m.groups[j].point.coords()).norm() <= 1e-12)
        return {false, "groups " + std::to_string(i) + " and " + std::to_string(j) +
                           " share a base point"};

  for (size_t gi = 0; gi < m.groups.size(); ++gi) {
    const ModelGroup& g = m.groups[gi];
    GroupSolver solver(g, m.d);
    const int k = static_cast<int>(g.vectors.size());
    if (solver.qr.rank() < k)
      return {false, "group " + std::to_string(gi) + " vectors are linearly dependent"};
    auto [x0, res0] = solver.solve({{MultiIndex(m.d), cplx(1.0)}});
    if (res0 > 1e-10)
      return {false, "group " + std::to_string(gi) +
                         " span does not contain the kernel at its base point"};
    for (int c = 0; c < k; ++c)
      for (int j = 0; j < m.d; ++j) {
        auto lowered = lower(g.vectors[c], g.point.coords(), j);
        if (lowered.empty()) continue;
        auto [x, res] = solver.solve(lowered);
        if (res > 1e-10)
          return {false, "group " + std::to_string(gi) + " vector " +
                             std::to_string(c) +
                             " is not closed under lowering in coordinate " +
                             std::to_string(j)};
      }
  }

  if (!(m.gram.diagonal().real().minCoeff() > 0.0))
    return {false, "gram matrix is not positive definite at tolerance"};
  // Equilibrated Gram: conditioning of the configuration's geometry, immune
  // to per-vector rescaling.
  Mat Dinv = Vec(m.gram.diagonal().cwiseSqrt().cwiseInverse()).asDiagonal();
  Mat Gn = Dinv * m.gram * Dinv;
  Eigen::SelfAdjointEigenSolver<Mat> es((Gn + Gn.adjoint()) / 2.0);
  const double mx = es.eigenvalues().maxCoeff(), mn = es.eigenvalues().minCoeff();
  if (!(mn > 1e-12 * mx))
    return {false, "gram matrix is not positive definite at tolerance"};
  return {true, ""};
}

std::vector<Mat> lowering_matrices(const CoinvariantModel& m) {
  const int n = m.dim();
  std::vector<Mat> C(m.d, Mat::Zero(n, n));
  int off = 0;
  for (const ModelGroup& g : m.groups) {
    GroupSolver solver(g, m.d);
    const int k = static_cast<int>(g.vectors.size());
    for (int c = 0; c < k; ++c)
      for (int j = 0; j < m.d; ++j) {
        auto lowered = lower(g.vectors[c], g.point.coords(), j);
        if (lowered.empty()) continue;
        auto [x, res] = solver.solve(lowered);
        if (res > 1e-9)
          throw validation_error("model is not closed under lowering");
        C[j].block(off, off + c, k, 1) = x;
      }
    off += k;
  }
  return C;
}

PsiResult psi(const CoinvariantModel& m, std::uint64_t seed) {
  ValidationReport rep = validate_coinvariant_model(m);
  if (!rep.valid) throw validation_error("invalid model: " + rep.witness);

  std::vector<Mat> C = lowering_matrices(m);

  // Equilibrate to unit-norm basis vectors, then pass to an orthonormal basis
  // of the span. The resulting tuple is similar to G^{-1}C*G (same joint
  // spectrum, same root-subspace dimensions) but consists of compressions of
  // contractions expressed orthonormally, so its norms stay of order one and
  // the spectral clustering/verification scales remain meaningful.
  Vec dg = m.gram.diagonal().cwiseSqrt();
  Mat D = dg.asDiagonal();
  Mat Dinv = Vec(dg.cwiseInverse()).asDiagonal();
  Mat Gn = Dinv * m.gram * Dinv;
  Eigen::SelfAdjointEigenSolver<Mat> es((Gn + Gn.adjoint()) / 2.0);
  const double mx = es.eigenvalues().maxCoeff(), mn = es.eigenvalues().minCoeff();
  const double gram_condition = mx / mn;
  const bool gram_warning = gram_condition > 1e10;

  Vec lam_sqrt = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Mat Q = es.eigenvectors();
  Mat half_inv = lam_sqrt.cwiseInverse().asDiagonal();
  Mat half = lam_sqrt.asDiagonal();
  std::vector<Mat> A;
  for (int j = 0; j < m.d; ++j) {
    Mat Cn = D * C[j] * Dinv;
    A.push_back(half_inv * Q.adjoint() * Cn.adjoint() * Q * half);
  }
  return PsiResult{joint_spectrum(CommutingTuple(std::move(A)), seed),
                   gram_warning, gram_condition};
}

PhiResult phi(const Divisor& X) {
  if (X.degree() == 0) throw validation_error("empty divisor");
  const int d = X.dim();
  if (!X.all_inside())
    throw validation_error("divisor points must lie in the open ball");

  PhiResult out;
  std::vector<ModelGroup> groups;
  if (d >= 2) {
    std::vector<BallPoint> pts;
    for (auto& [p, mult] : X.points()) {
      if (mult > 1)
        throw validation_error(
            "multiple points are unsupported for d >= 2 (the inverse map "
            "exists only on the multiplicity-free locus)");
      pts.push_back(p);
      groups.push_back({p, {{{MultiIndex(d), cplx(1.0)}}}});
    }
    out.chain = build_blaschke(pts);
  } else {
    out.product = classical_product(X);
    for (auto& [p, mult] : X.points()) {
      ModelGroup g{p, {}};
      for (int l = 0; l < mult; ++l) {
        MultiIndex a(1);
        a[0] = l;
        g.vectors.push_back({{a, cplx(1.0)}});
      }
      groups.push_back(std::move(g));
    }
  }
  out.model = make_model(d, std::move(groups));
  return out;
}

double kernel_identity_error(const PhiResult& f,
                             const std::vector<std::pair<Vec, Vec>>& samples) {
  if (f.chain) return kernel_identity_error(*f.chain, samples);
  if (!f.product) throw validation_error("result carries no inner function");

  const CoinvariantModel& m = f.model;
  const int n = m.dim();
  // e_i(z) = value of the i-th basis combination as a function of z.
  auto evals = [&](const Vec& z) {
    Vec e(n);
    int i = 0;
    for (const ModelGroup& g : m.groups)
      for (auto& v : g.vectors) {
        cplx s = 0.0;
        for (auto& [a, c] : v)
          s += c * kernel_derivative_eval(a, MultiIndex(m.d), z, g.point.coords());
        e(i++) = s;
      }
    return e;
  };
  // k_P(z,w) = e(z)^T G^{-1} conj(e(w)) reproduces the span of the basis.
  Mat ginv = m.gram.inverse();
  double worst = 0.0;
  for (const auto& [z, w] : samples) {
    cplx k = 1.0 / (1.0 - w.dot(z));
    cplx bz = evaluate_classical(*f.product, z(0));
    cplx bw = evaluate_classical(*f.product, w(0));
    cplx lhs = (1.0 - bz * std::conj(bw)) * k;
    cplx rhs = (evals(z).transpose() * ginv * evals(w).conjugate())(0);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

Mat truncated_projection(const CoinvariantModel& m, int N) {
  BasisContext ctx(m.d, N);
  Mat V(ctx.dim(), m.dim());
  int col = 0;
  for (const ModelGroup& g : m.groups)
    for (auto& v : g.vectors) {
      TruncVec t(m.d, N);
      for (auto& [a, c] : v) {
        KernelExpansion ke = kernel_coefficients(g.point.coords(), a, N);
        t = t + ke.series * c;
      }
      V.col(col++) = t.orthonormal_coords(ctx);
    }
  // Orthonormalize and project.
  Eigen::HouseholderQR<Mat> qr(V);
  Mat Q = qr.householderQ() * Mat::Identity(ctx.dim(), m.dim());
  return Q * Q.adjoint();
}

CoinvariantModel aut_act(const CoinvariantModel& m, const BallAutomorphism& f) {
  if (f.dim() != m.d) throw validation_error("automorphism dimension mismatch");
  std::vector<ModelGroup> groups;
  for (const ModelGroup& g : m.groups) {
    if (g.vectors.size() != 1)
      throw validation_error(
          "automorphism action supports kernel-span models only");
    const auto& v = g.vectors[0];
    if (v.size() != 1 || v.begin()->first.total() != 0)
      throw validation_error(
          "automorphism action supports kernel-span models only "
          "(derivative vectors present)");
    groups.push_back(
        {BallPoint(f(g.point.coords())), {{{MultiIndex(m.d), cplx(1.0)}}}});
  }
  return make_model(m.d, std::move(groups));
}

}  // namespace pickgrass
