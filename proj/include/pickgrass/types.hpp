#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pickgrass {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Bad input (dimension mismatch, invariant violation, malformed data).
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerically ill-posed instance (ambiguous clustering, singular Gram, ...).
class degeneracy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exponent tuple for monomials z^alpha in d variables.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int d) : exp_(d, 0) {}
  explicit MultiIndex(std::vector<int> exps) : exp_(std::move(exps)) {
    for (int e : exp_)
      if (e < 0) throw validation_error("multi-index entries must be >= 0");
  }

  static MultiIndex unit(int d, int j) {
    MultiIndex a(d);
    a.exp_[j] = 1;
    return a;
  }

  int dim() const { return static_cast<int>(exp_.size()); }
  int operator[](int i) const { return exp_[i]; }
  int& operator[](int i) { return exp_[i]; }
  int total() const {
    int s = 0;
    for (int e : exp_) s += e;
    return s;
  }

  MultiIndex plus(int j) const {
    MultiIndex a = *this;
    ++a.exp_[j];
    return a;
  }
  MultiIndex minus(int j) const {
    MultiIndex a = *this;
    if (a.exp_[j] <= 0) throw validation_error("multi-index decrement below zero");
    --a.exp_[j];
    return a;
  }
  MultiIndex operator+(const MultiIndex& o) const {
    MultiIndex a = *this;
    for (int i = 0; i < dim(); ++i) a.exp_[i] += o.exp_[i];
    return a;
  }
  // Componentwise a >= b.
  bool dominates(const MultiIndex& o) const {
    for (int i = 0; i < dim(); ++i)
      if (exp_[i] < o.exp_[i]) return false;
    return true;
  }
  MultiIndex operator-(const MultiIndex& o) const {
    MultiIndex a = *this;
    for (int i = 0; i < dim(); ++i) {
      a.exp_[i] -= o.exp_[i];
      if (a.exp_[i] < 0) throw validation_error("multi-index subtraction below zero");
    }
    return a;
  }

  bool operator==(const MultiIndex& o) const { return exp_ == o.exp_; }
  bool operator!=(const MultiIndex& o) const { return exp_ != o.exp_; }

  // Graded order; within a degree, larger exponents on earlier coordinates
  // come first (so for d=2: z1^2 < z1 z2 < z2^2 reads left to right).
  bool operator<(const MultiIndex& o) const {
    int ta = total(), tb = o.total();
    if (ta != tb) return ta < tb;
    for (int i = 0; i < dim(); ++i)
      if (exp_[i] != o.exp_[i]) return exp_[i] > o.exp_[i];
    return false;
  }

  const std::vector<int>& exponents() const { return exp_; }

  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < dim(); ++i) {
      if (i) s += ",";
      s += std::to_string(exp_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<int> exp_;
};

// alpha! as a double (exact for the small entries that arise here).
inline double mi_factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 2; k <= a[i]; ++k) f *= k;
  return f;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// alpha! / |alpha|!  ==  1 / multinomial(|alpha|; alpha), computed as a
// product of ratios to avoid large intermediates.
inline double monomial_norm_sq(const MultiIndex& a) {
  double w = 1.0;
  int seen = 0;
  for (int i = 0; i < a.dim(); ++i) {
    for (int k = 1; k <= a[i]; ++k) {
      ++seen;
      w *= static_cast<double>(k) / static_cast<double>(seen);
    }
  }
  return w;  // = a!/|a|!
}

// sqrt(|alpha|!/alpha!): coordinates of the orthonormal monomial basis.
inline double orthonormal_scale(const MultiIndex& a) {
  return 1.0 / std::sqrt(monomial_norm_sq(a));
}

inline int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

// All multi-indices in d variables with total degree exactly m, in the
// canonical (graded) order used throughout.
void append_indices_of_degree(int d, int m, std::vector<MultiIndex>& out);

// All multi-indices with total degree <= N, graded order.
std::vector<MultiIndex> indices_up_to(int d, int N);

}  // namespace pickgrass
