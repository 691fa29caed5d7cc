#pragma once

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "gamow/exact.hpp"

namespace gamow {

/// Dense univariate polynomial with coefficients in ascending powers.
/// The coefficient vector never carries trailing zeros; the zero
/// polynomial has no coefficients and degree -1.
template <typename Scalar>
class Polynomial {
 public:
  using Coefficients = VectorX<Scalar>;

  Polynomial() = default;

  explicit Polynomial(Coefficients coefficients) : coeffs_(std::move(coefficients)) { trim(); }

  Polynomial(std::initializer_list<Scalar> coefficients)
      : coeffs_(static_cast<Eigen::Index>(coefficients.size())) {
    std::copy(coefficients.begin(), coefficients.end(), coeffs_.data());
    trim();
  }

  static Polynomial constant(const Scalar& c) { return Polynomial({c}); }

  static Polynomial monomial(const Scalar& c, int power) {
    Coefficients v = Coefficients::Zero(power + 1);
    v(power) = c;
    return Polynomial(std::move(v));
  }

  /// prod_i (z - roots_i)
  static Polynomial from_roots(const std::vector<Scalar>& roots) {
    Polynomial p = constant(Scalar(1));
    for (const auto& root : roots) p = p * Polynomial({-root, Scalar(1)});
    return p;
  }

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return coeffs_.size() == 0; }
  [[nodiscard]] const Coefficients& coefficients() const { return coeffs_; }

  [[nodiscard]] Scalar coefficient(int power) const {
    if (power < 0 || power > degree()) return Scalar(0);
    return coeffs_(power);
  }

  [[nodiscard]] Scalar leading() const { return is_zero() ? Scalar(0) : coeffs_(degree()); }

  template <typename Arg>
  [[nodiscard]] Scalar operator()(const Arg& x) const {
    Scalar acc(0);
    for (Eigen::Index p = coeffs_.size(); p-- > 0;) acc = acc * Scalar(x) + coeffs_(p);
    return acc;
  }

  [[nodiscard]] Polynomial derivative() const {
    if (degree() < 1) return {};
    Coefficients d(degree());
    for (int p = 1; p <= degree(); ++p) d(p - 1) = coeffs_(p) * Scalar(p);
    return Polynomial(std::move(d));
  }

  Polynomial operator-() const { return Polynomial(Coefficients(-coeffs_)); }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    const Eigen::Index n = std::max(a.coeffs_.size(), b.coeffs_.size());
    Coefficients sum = Coefficients::Zero(n);
    sum.head(a.coeffs_.size()) += a.coeffs_;
    sum.head(b.coeffs_.size()) += b.coeffs_;
    return Polynomial(std::move(sum));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Coefficients prod = Coefficients::Zero(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (Eigen::Index i = 0; i < a.coeffs_.size(); ++i)
      for (Eigen::Index j = 0; j < b.coeffs_.size(); ++j) prod(i + j) += a.coeffs_(i) * b.coeffs_(j);
    return Polynomial(std::move(prod));
  }

  friend Polynomial operator*(const Scalar& c, const Polynomial& p) {
    return Polynomial(Coefficients(p.coeffs_ * c));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return false;
    for (Eigen::Index i = 0; i < a.coeffs_.size(); ++i)
      if (!(a.coeffs_(i) == b.coeffs_(i))) return false;
    return true;
  }

 private:
  void trim() {
    Eigen::Index n = coeffs_.size();
    while (n > 0 && gamow::is_zero(coeffs_(n - 1))) --n;
    if (n != coeffs_.size()) coeffs_.conservativeResize(n);
  }

  Coefficients coeffs_;
};

/// numerator(z) / denominator(z), closed under differentiation.
template <typename Scalar>
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Polynomial<Scalar>::constant(Scalar(1))) {}

  RationalFunction(Polynomial<Scalar> numerator, Polynomial<Scalar> denominator)
      : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
  }

  explicit RationalFunction(Polynomial<Scalar> polynomial)
      : RationalFunction(std::move(polynomial), Polynomial<Scalar>::constant(Scalar(1))) {}

  [[nodiscard]] const Polynomial<Scalar>& numerator() const { return num_; }
  [[nodiscard]] const Polynomial<Scalar>& denominator() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }

  /// deg(den) - deg(num); the function decays like |z|^-decay_order.
  [[nodiscard]] int decay_order() const {
    return num_.is_zero() ? std::numeric_limits<int>::max() : den_.degree() - num_.degree();
  }

  template <typename Arg>
  [[nodiscard]] Scalar operator()(const Arg& z) const {
    const Scalar d = den_(z);
    if (gamow::is_zero(d)) throw std::domain_error("RationalFunction: evaluation at a pole");
    return num_(z) / d;
  }

  [[nodiscard]] RationalFunction derivative() const {
    return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_};
  }

  [[nodiscard]] RationalFunction derivative(int order) const {
    RationalFunction d = *this;
    for (int i = 0; i < order; ++i) d = d.derivative();
    return d;
  }

  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }

 private:
  Polynomial<Scalar> num_;
  Polynomial<Scalar> den_;
};

}  // namespace gamow
