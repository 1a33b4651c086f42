#include "pickgrass/drury_arveson.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace pickgrass {

namespace {

using TermKey = std::tuple<std::vector<int>, std::vector<int>, int>;
using TermMap = std::map<TermKey, double>;  // c * z^a * conj(w)^b * u^-m

TermMap d_wbar(const TermMap& in, int i) {
  TermMap out;
  for (auto& [key, c] : in) {
    const auto& [a, b, m] = key;
    if (b[i] > 0) {
      auto b2 = b;
      --b2[i];
      out[{a, b2, m}] += c * b[i];
    }
    auto a2 = a;
    ++a2[i];
    out[{a2, b, m + 1}] += c * m;
  }
  return out;
}

TermMap d_z(const TermMap& in, int j) {
  TermMap out;
  for (auto& [key, c] : in) {
    const auto& [a, b, m] = key;
    if (a[j] > 0) {
      auto a2 = a;
      --a2[j];
      out[{a2, b, m}] += c * a[j];
    }
    auto b2 = b;
    ++b2[j];
    out[{a, b2, m + 1}] += c * m;
  }
  return out;
}

cplx pow_vec(const Vec& z, const std::vector<int>& e, bool conjugate) {
  cplx p = 1.0;
  for (size_t i = 0; i < e.size(); ++i) {
    cplx base = conjugate ? std::conj(z(static_cast<int>(i))) : z(static_cast<int>(i));
    for (int k = 0; k < e[i]; ++k) p *= base;
  }
  return p;
}

}  // namespace

cplx kernel_derivative_eval(const MultiIndex& alpha, const MultiIndex& beta,
                            const Vec& z, const Vec& w) {
  const int d = static_cast<int>(z.size());
  if (w.size() != d || alpha.dim() != d || beta.dim() != d)
    throw validation_error("kernel derivative: dimension mismatch");
  TermMap terms;
  terms[{std::vector<int>(d, 0), std::vector<int>(d, 0), 1}] = 1.0;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < alpha[i]; ++k) terms = d_wbar(terms, i);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < beta[j]; ++k) terms = d_z(terms, j);

  const cplx u = 1.0 - w.dot(z);  // 1 - sum_i z_i conj(w_i)
  if (std::abs(u) < 1e-300)
    throw validation_error("kernel evaluated at a singular pair");
  cplx total = 0.0;
  for (auto& [key, c] : terms) {
    const auto& [a, b, m] = key;
    cplx t = c * pow_vec(z, a, false) * pow_vec(w, b, true);
    for (int k = 0; k < m; ++k) t /= u;
    total += t;
  }
  return total;
}

cplx derivative_kernel_inner(const MultiIndex& alpha, const Vec& lambda,
                             const MultiIndex& beta, const Vec& mu) {
  return kernel_derivative_eval(alpha, beta, mu, lambda);
}

BasisContext::BasisContext(int d_, int N_) : d(d_), N(N_) {
  if (d < 1 || N < 0) throw validation_error("basis context needs d >= 1, N >= 0");
  indices = indices_up_to(d, N);
  for (int i = 0; i < dim(); ++i) index_of[indices[i]] = i;
}

int BasisContext::degree_offset(int m) const {
  if (m == 0) return 0;
  return binom(m - 1 + d, d);
}

int BasisContext::degree_count(int m) const {
  return binom(m + d - 1, d - 1);
}

TruncVec::TruncVec(int d, int N, std::map<MultiIndex, cplx> c)
    : d_(d), N_(N), c_(std::move(c)) {
  for (auto& [a, v] : c_) {
    if (a.dim() != d_) throw validation_error("coefficient index dimension mismatch");
    if (a.total() > N_) throw validation_error("coefficient beyond degree cap");
  }
}

cplx TruncVec::coeff(const MultiIndex& a) const {
  auto it = c_.find(a);
  return it == c_.end() ? cplx(0.0) : it->second;
}

void TruncVec::set_coeff(const MultiIndex& a, cplx v) {
  if (a.dim() != d_) throw validation_error("coefficient index dimension mismatch");
  if (a.total() > N_) throw validation_error("coefficient beyond degree cap");
  if (v == cplx(0.0))
    c_.erase(a);
  else
    c_[a] = v;
}

void TruncVec::prune(const MultiIndex& a) {
  auto it = c_.find(a);
  if (it != c_.end() && it->second == cplx(0.0)) c_.erase(it);
}

TruncVec TruncVec::operator+(const TruncVec& o) const {
  if (d_ != o.d_ || N_ != o.N_) throw validation_error("truncation mismatch");
  TruncVec r = *this;
  for (auto& [a, v] : o.c_) {
    r.c_[a] += v;
    r.prune(a);
  }
  return r;
}

TruncVec TruncVec::operator-(const TruncVec& o) const {
  return *this + o * cplx(-1.0);
}

TruncVec TruncVec::operator*(cplx s) const {
  TruncVec r(d_, N_);
  if (s == cplx(0.0)) return r;
  for (auto& [a, v] : c_) r.c_[a] = v * s;
  return r;
}

TruncVec TruncVec::operator*(const TruncVec& o) const {
  if (d_ != o.d_ || N_ != o.N_) throw validation_error("truncation mismatch");
  TruncVec r(d_, N_);
  for (auto& [a, va] : c_)
    for (auto& [b, vb] : o.c_) {
      if (a.total() + b.total() > N_) continue;
      r.c_[a + b] += va * vb;
    }
  for (auto it = r.c_.begin(); it != r.c_.end();)
    it = (it->second == cplx(0.0)) ? r.c_.erase(it) : std::next(it);
  return r;
}

cplx TruncVec::inner(const TruncVec& o) const {
  if (d_ != o.d_) throw validation_error("truncation mismatch");
  cplx s = 0.0;
  for (auto& [a, v] : c_) {
    auto it = o.c_.find(a);
    if (it != o.c_.end()) s += v * std::conj(it->second) * monomial_norm_sq(a);
  }
  return s;
}

double TruncVec::norm_sq() const {
  double s = 0.0;
  for (auto& [a, v] : c_) s += std::norm(v) * monomial_norm_sq(a);
  return s;
}

double TruncVec::l1() const {
  double s = 0.0;
  for (auto& [a, v] : c_) s += std::abs(v);
  return s;
}

cplx TruncVec::evaluate(const Vec& z) const {
  if (z.size() != d_) throw validation_error("evaluation dimension mismatch");
  cplx s = 0.0;
  for (auto& [a, v] : c_) s += v * pow_vec(z, a.exponents(), false);
  return s;
}

cplx TruncVec::derivative_at(const MultiIndex& beta, const Vec& z) const {
  if (beta.dim() != d_ || z.size() != d_)
    throw validation_error("derivative dimension mismatch");
  cplx s = 0.0;
  for (auto& [a, v] : c_) {
    if (!a.dominates(beta)) continue;
    double fall = 1.0;  // a! / (a-beta)!
    for (int i = 0; i < d_; ++i)
      for (int k = a[i] - beta[i] + 1; k <= a[i]; ++k) fall *= k;
    s += v * fall * pow_vec(z, (a - beta).exponents(), false);
  }
  return s;
}

Vec TruncVec::orthonormal_coords(const BasisContext& ctx) const {
  if (ctx.d != d_ || ctx.N != N_) throw validation_error("context mismatch");
  Vec v = Vec::Zero(ctx.dim());
  for (auto& [a, c] : c_)
    v(ctx.index_of.at(a)) = c * std::sqrt(monomial_norm_sq(a));
  return v;
}

TruncVec TruncVec::from_orthonormal_coords(const BasisContext& ctx, const Vec& v) {
  if (v.size() != ctx.dim()) throw validation_error("coordinate length mismatch");
  TruncVec r(ctx.d, ctx.N);
  for (int i = 0; i < ctx.dim(); ++i) {
    if (v(i) == cplx(0.0)) continue;
    r.c_[ctx.indices[i]] = v(i) / std::sqrt(monomial_norm_sq(ctx.indices[i]));
  }
  return r;
}

KernelExpansion kernel_coefficients(const Vec& lambda, const MultiIndex& alpha,
                                    int N) {
  const int d = static_cast<int>(lambda.size());
  if (alpha.dim() != d) throw validation_error("kernel expansion dimension mismatch");
  if (lambda.norm() >= 1.0)
    throw validation_error("kernel expansion needs a point in the open ball");
  TruncVec series(d, N);
  double trunc_sq = 0.0;
  for (const MultiIndex& gamma : indices_up_to(d, N)) {
    if (!gamma.dominates(alpha)) continue;
    const MultiIndex delta = gamma - alpha;
    // |gamma|! / delta!
    const double scale = factorial(gamma.total()) / mi_factorial(delta);
    cplx c = scale * pow_vec(lambda, delta.exponents(), true);
    if (c != cplx(0.0)) series.set_coeff(gamma, c);
    trunc_sq += std::norm(c) * monomial_norm_sq(gamma);
  }
  const double full_sq =
      derivative_kernel_inner(alpha, lambda, alpha, lambda).real();
  const double tail_sq = std::max(0.0, full_sq - trunc_sq);
  return {std::move(series), std::sqrt(tail_sq)};
}

Mat multiplication_matrix(const TruncVec& f, const BasisContext& ctx) {
  if (f.dim() != ctx.d || f.degree_cap() != ctx.N)
    throw validation_error("context mismatch");
  Mat M = Mat::Zero(ctx.dim(), ctx.dim());
  for (auto& [a, c] : f.coeffs()) {
    for (int ib = 0; ib < ctx.dim(); ++ib) {
      const MultiIndex& b = ctx.indices[ib];
      if (a.total() + b.total() > ctx.N) continue;
      const MultiIndex g = a + b;
      // e_b -> (s_b / s_g) e_g with s_a = sqrt(|a|!/a!)
      const double ratio = std::sqrt(monomial_norm_sq(g) / monomial_norm_sq(b));
      M(ctx.index_of.at(g), ib) += c * ratio;
    }
  }
  return M;
}

Mat coordinate_mult_matrix(int j, const BasisContext& ctx) {
  Mat M = Mat::Zero(ctx.dim(), ctx.dim());
  for (int ib = 0; ib < ctx.dim(); ++ib) {
    const MultiIndex& b = ctx.indices[ib];
    if (b.total() + 1 > ctx.N) continue;
    const double w = std::sqrt((b[j] + 1.0) / (b.total() + 1.0));
    M(ctx.index_of.at(b.plus(j)), ib) = w;
  }
  return M;
}

Vec apply_coordinate_mult(int j, const BasisContext& ctx, const Vec& v) {
  Vec out = Vec::Zero(ctx.dim());
  for (int ib = 0; ib < ctx.dim(); ++ib) {
    const MultiIndex& b = ctx.indices[ib];
    if (b.total() + 1 > ctx.N || v(ib) == cplx(0.0)) continue;
    const double w = std::sqrt((b[j] + 1.0) / (b.total() + 1.0));
    out(ctx.index_of.at(b.plus(j))) += w * v(ib);
  }
  return out;
}

Vec apply_coordinate_mult_adjoint(int j, const BasisContext& ctx, const Vec& v) {
  Vec out = Vec::Zero(ctx.dim());
  for (int ib = 0; ib < ctx.dim(); ++ib) {
    const MultiIndex& b = ctx.indices[ib];
    if (b.total() + 1 > ctx.N) continue;
    const double w = std::sqrt((b[j] + 1.0) / (b.total() + 1.0));
    out(ib) += w * v(ctx.index_of.at(b.plus(j)));
  }
  return out;
}

cplx space_inner(const SpaceVector& a, const SpaceVector& b) {
  if (std::holds_alternative<TruncVec>(a)) {
    const TruncVec& va = std::get<TruncVec>(a);
    if (std::holds_alternative<TruncVec>(b)) return va.inner(std::get<TruncVec>(b));
    const KernelDescriptor& kb = std::get<KernelDescriptor>(b);
    return va.derivative_at(kb.alpha, kb.point);  // <f, k^(b)> = (d^b f)(mu)
  }
  const KernelDescriptor& ka = std::get<KernelDescriptor>(a);
  if (std::holds_alternative<TruncVec>(b))
    return std::conj(std::get<TruncVec>(b).derivative_at(ka.alpha, ka.point));
  const KernelDescriptor& kb = std::get<KernelDescriptor>(b);
  return derivative_kernel_inner(ka.alpha, ka.point, kb.alpha, kb.point);
}

Mat gram_matrix(const std::vector<SpaceVector>& v) {
  const int n = static_cast<int>(v.size());
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = space_inner(v[j], v[i]);
  return G;
}

}  // namespace pickgrass
