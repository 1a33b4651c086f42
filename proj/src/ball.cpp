#include "pickgrass/ball.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace pickgrass {

void append_indices_of_degree(int d, int m, std::vector<MultiIndex>& out) {
  MultiIndex a(d);
  // Recursive enumeration in the canonical order: earlier coordinates carry
  // larger exponents first.
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == d - 1) {
      a[pos] = rem;
      out.push_back(a);
      return;
    }
    for (int e = rem; e >= 0; --e) {
      a[pos] = e;
      rec(pos + 1, rem - e);
    }
    a[pos] = 0;
  };
  rec(0, m);
}

std::vector<MultiIndex> indices_up_to(int d, int N) {
  std::vector<MultiIndex> out;
  for (int m = 0; m <= N; ++m) append_indices_of_degree(d, m, out);
  return out;
}

namespace {

bool coords_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

Divisor::Divisor(int d, std::vector<std::pair<BallPoint, int>> pts) : d_(d) {
  for (auto& [p, m] : pts) {
    if (p.dim() != d) throw validation_error("divisor point dimension mismatch");
    if (m <= 0) throw validation_error("divisor multiplicities must be positive");
  }
  // Merge points closer than 1e-12 (ties resolved toward the first seen).
  for (auto& [p, m] : pts) {
    bool merged = false;
    for (auto& [q, mq] : pts_) {
      if ((p.coords() - q.coords()).norm() <= 1e-12) {
        mq += m;
        merged = true;
        break;
      }
    }
    if (!merged) pts_.emplace_back(p, m);
  }
  std::sort(pts_.begin(), pts_.end(), [](const auto& a, const auto& b) {
    return coords_less(a.first.coords(), b.first.coords());
  });
}

int Divisor::degree() const {
  int s = 0;
  for (auto& [p, m] : pts_) s += m;
  return s;
}

std::vector<Vec> Divisor::expanded() const {
  std::vector<Vec> out;
  for (auto& [p, m] : pts_)
    for (int i = 0; i < m; ++i) out.push_back(p.coords());
  return out;
}

bool Divisor::all_inside() const {
  for (auto& [p, m] : pts_)
    if (!p.inside()) return false;
  return true;
}

BallAutomorphism::BallAutomorphism(Mat U, BallPoint b)
    : unitary(std::move(U)), base(std::move(b)) {
  if (unitary.rows() != base.dim() || unitary.cols() != base.dim())
    throw validation_error("automorphism unitary has wrong shape");
  double defect = (unitary.adjoint() * unitary - Mat::Identity(unitary.rows(), unitary.cols())).norm();
  if (defect > 1e-12 * std::max(1.0, unitary.norm()))
    throw validation_error("automorphism matrix is not unitary");
}

Vec BallAutomorphism::operator()(const Vec& z) const {
  return unitary * mobius_involution(base.coords(), z);
}

Vec mobius_involution(const Vec& lambda, const Vec& z) {
  if (lambda.size() != z.size())
    throw validation_error("mobius involution dimension mismatch");
  const double ln2 = lambda.squaredNorm();
  if (ln2 >= 1.0) throw validation_error("involution base point outside open ball");
  if (ln2 == 0.0) return -z;
  const cplx zl = lambda.dot(z);  // <z, lambda> (Eigen dot conjugates lhs)
  const Vec proj = (zl / ln2) * lambda;
  const double s = std::sqrt(1.0 - ln2);
  const cplx denom = 1.0 - zl;
  if (std::abs(denom) < 1e-300)
    throw validation_error("mobius involution evaluated at a pole");
  return (lambda - proj - s * (z - proj)) / denom;
}

double pseudo_distance(const Vec& z, const Vec& w) {
  if (z.size() != w.size()) throw validation_error("distance dimension mismatch");
  if (z.norm() >= 1.0 || w.norm() >= 1.0)
    throw validation_error("pseudohyperbolic distance needs points in the open ball");
  // |phi_z(w)| via the norm identity; more stable than forming phi directly.
  const double a = 1.0 - z.squaredNorm();
  const double b = 1.0 - w.squaredNorm();
  const double c = std::norm(cplx(1.0, 0.0) - z.dot(w));
  double t = 1.0 - a * b / c;
  if (t < 0.0) t = 0.0;
  return std::sqrt(t);
}

namespace detail {

double bottleneck_bruteforce(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double mx = 0.0;
    for (int i = 0; i < n; ++i) mx = std::max(mx, cost(i, perm[i]));
    best = std::min(best, mx);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

namespace {
// Kuhn's augmenting-path matcher on the boolean graph cost <= thr.
bool try_kuhn(const Eigen::MatrixXd& cost, double thr, int u,
              std::vector<int>& match, std::vector<char>& used) {
  const int n = static_cast<int>(cost.rows());
  for (int v = 0; v < n; ++v) {
    if (cost(u, v) > thr || used[v]) continue;
    used[v] = 1;
    if (match[v] < 0 || try_kuhn(cost, thr, match[v], match, used)) {
      match[v] = u;
      return true;
    }
  }
  return false;
}

bool feasible(const Eigen::MatrixXd& cost, double thr) {
  const int n = static_cast<int>(cost.rows());
  std::vector<int> match(n, -1);
  for (int u = 0; u < n; ++u) {
    std::vector<char> used(n, 0);
    if (!try_kuhn(cost, thr, u, match, used)) return false;
  }
  return true;
}
}  // namespace

double bottleneck_matching(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (n == 0) return 0.0;
  std::vector<double> vals(cost.data(), cost.data() + n * n);
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  int lo = 0, hi = static_cast<int>(vals.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (feasible(cost, vals[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return vals[lo];
}

}  // namespace detail

namespace {

Eigen::MatrixXd pairwise_cost(const Divisor& a, const Divisor& b, bool pseudo) {
  if (a.dim() != b.dim())
    throw validation_error("matching distance: dimension mismatch");
  if (a.degree() != b.degree())
    throw validation_error("matching distance: divisors have different degree");
  auto pa = a.expanded(), pb = b.expanded();
  const int n = static_cast<int>(pa.size());
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cost(i, j) = pseudo ? pseudo_distance(pa[i], pb[j]) : (pa[i] - pb[j]).norm();
  return cost;
}

}  // namespace

double optimal_matching_distance(const Divisor& a, const Divisor& b) {
  Eigen::MatrixXd cost = pairwise_cost(a, b, /*pseudo=*/false);
  return detail::bottleneck_matching(cost);
}

double symmetric_distance(const Divisor& a, const Divisor& b) {
  if (!a.all_inside() || !b.all_inside())
    throw validation_error("symmetric distance needs divisors inside the open ball");
  Eigen::MatrixXd cost = pairwise_cost(a, b, /*pseudo=*/true);
  return detail::bottleneck_matching(cost);
}

Divisor apply_automorphism(const BallAutomorphism& f, const Divisor& X) {
  if (f.dim() != X.dim())
    throw validation_error("automorphism/divisor dimension mismatch");
  std::vector<std::pair<BallPoint, int>> pts;
  for (auto& [p, m] : X.points()) pts.emplace_back(BallPoint(f(p.coords())), m);
  return Divisor(X.dim(), std::move(pts));
}

}  // namespace pickgrass
