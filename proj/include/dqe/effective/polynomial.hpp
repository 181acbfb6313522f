#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dqe/core/error.hpp"

namespace dqe {

// Real polynomial, coefficients stored lowest degree first.
class Polynomial {
 public:
  Polynomial() : c_{0.0} {}
  Polynomial(std::initializer_list<double> ascending) : c_(ascending) { trim(); }
  explicit Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) { trim(); }

  static Polynomial constant(double v) { return Polynomial{v}; }
  static Polynomial linear(double c0, double c1) { return Polynomial{c0, c1}; }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double coeff(int k) const { return k >= 0 && k <= degree() ? c_[static_cast<std::size_t>(k)] : 0.0; }
  const std::vector<double>& ascending() const { return c_; }
  std::vector<double> descending() const { return {c_.rbegin(), c_.rend()}; }

  double operator()(double x) const {
    double v = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
    return v;
  }

  Polynomial derivative() const {
    if (degree() == 0) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(double s, const Polynomial& a) {
    std::vector<double> r = a.c_;
    for (double& v : r) v *= s;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator+(const Polynomial& a, double s) { return a + constant(s); }
  friend Polynomial operator+(double s, const Polynomial& a) { return a + constant(s); }
  friend Polynomial operator-(const Polynomial& a, double s) { return a + constant(-s); }
  friend Polynomial operator-(double s, const Polynomial& a) { return constant(s) - a; }

 private:
  void trim() {
    while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
    if (c_.empty()) c_.push_back(0.0);
  }
  std::vector<double> c_;
};

// Roots as eigenvalues of the companion matrix of the monic polynomial.
inline std::vector<std::complex<double>> polynomial_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw NumericalError("polynomial_roots: constant polynomial has no roots");
  const double lead = p.coeff(n);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) comp(0, k) = -p.coeff(n - 1 - k) / lead;
  for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

// Newton polishing of a real root; keeps the original if an iteration diverges.
inline double polish_root(const Polynomial& p, double x, int iters = 8) {
  const Polynomial d = p.derivative();
  for (int i = 0; i < iters; ++i) {
    const double fx = p(x), dx = d(x);
    if (dx == 0.0 || !std::isfinite(fx / dx)) break;
    const double next = x - fx / dx;
    if (std::abs(p(next)) > std::abs(fx)) break;
    x = next;
  }
  return x;
}

}  // namespace dqe
