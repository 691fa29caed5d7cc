#pragma once

// Jordan-block representation of the Hamiltonian on the r-dimensional span
// of the higher-order Gamow kets |z_R>^(0..r-1), and exact semigroup time
// evolution of those kets.
//
// The kets are identified with the standard basis e_0..e_{r-1}. With
// H|k> = z_R|k> + k|k-1>, the block has z_R on the diagonal and 1..r-1 on
// the first superdiagonal. Time evolution factors as
//   exp(-iHt) = exp(-i z_R t) * P(t),   P(t)(p, k) = C(k, p) (-it)^(k-p),
// and only P(t) is stored; the scalar phase is kept as (pole, elapsed time)
// and evaluated numerically on demand.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "gamow/combinatorics.hpp"
#include "gamow/exact.hpp"
#include "gamow/polynomial.hpp"

namespace gamow {

/// Exponent of [energy], stored in half units so that the ket tags
/// -1/2 - k stay integral.
class EnergyDimension {
 public:
  constexpr EnergyDimension() = default;

  static constexpr EnergyDimension from_half_units(int half_units) {
    EnergyDimension d;
    d.half_units_ = half_units;
    return d;
  }
  static constexpr EnergyDimension of_power(int exponent) { return from_half_units(2 * exponent); }

  [[nodiscard]] constexpr int half_units() const { return half_units_; }
  [[nodiscard]] constexpr double exponent() const { return half_units_ / 2.0; }

  friend constexpr EnergyDimension operator+(EnergyDimension a, EnergyDimension b) {
    return from_half_units(a.half_units_ + b.half_units_);
  }
  friend constexpr EnergyDimension operator-(EnergyDimension a, EnergyDimension b) {
    return from_half_units(a.half_units_ - b.half_units_);
  }
  friend constexpr bool operator==(EnergyDimension, EnergyDimension) = default;

 private:
  int half_units_ = 0;
};

/// Resonance pole z_R = E_R - i*Gamma/2 of order r, Gamma > 0.
template <RealScalar Real>
class ComplexPole {
 public:
  using Scalar = Complex<Real>;

  ComplexPole(Real resonance_energy, Real width, int order)
      : energy_(std::move(resonance_energy)), width_(std::move(width)), order_(order) {
    if (!(width_ > Real(0))) throw std::domain_error("ComplexPole: width must be positive");
    if (order_ < 1) throw std::domain_error("ComplexPole: order must be at least 1");
  }

  [[nodiscard]] const Real& resonance_energy() const { return energy_; }
  [[nodiscard]] const Real& width() const { return width_; }
  [[nodiscard]] int order() const { return order_; }

  [[nodiscard]] Scalar position() const { return make_complex<Real>(energy_, -width_ / Real(2)); }
  [[nodiscard]] std::complex<double> position_value() const { return to_std_complex(position()); }

  /// Same resonance, different order.
  [[nodiscard]] ComplexPole with_order(int order) const { return {energy_, width_, order}; }

 private:
  Real energy_;
  Real width_;
  int order_;
};

template <RealScalar Real>
void require_time_nonnegative(const Real& t) {
  if (t < Real(0)) throw std::domain_error("time evolution is only defined for t >= 0");
}

/// A vector in the span of the Gamow kets after evolving for `elapsed`.
/// `coefficients` holds the polynomial part only; the full vector is
/// exp(-i z_R elapsed) * sum_k coefficients(k) |z_R>^(k).
template <RealScalar Real>
class GamowChainVector {
 public:
  using Scalar = Complex<Real>;

  GamowChainVector(ComplexPole<Real> pole, VectorX<Scalar> coefficients, Real elapsed = Real(0))
      : pole_(std::move(pole)), coeffs_(std::move(coefficients)), elapsed_(std::move(elapsed)) {
    if (coeffs_.size() != pole_.order())
      throw std::invalid_argument("GamowChainVector: coefficient count must equal the pole order");
    require_time_nonnegative(elapsed_);
  }

  static GamowChainVector basis(const ComplexPole<Real>& pole, int k) {
    if (k < 0 || k >= pole.order()) throw std::out_of_range("GamowChainVector::basis: order out of range");
    VectorX<Scalar> e = VectorX<Scalar>::Zero(pole.order());
    e(k) = Scalar(1);
    return {pole, std::move(e)};
  }

  /// |z_R>^(k) has dimension [energy]^(-1/2 - k).
  static EnergyDimension dimension(int k) { return EnergyDimension::from_half_units(-1 - 2 * k); }

  [[nodiscard]] const ComplexPole<Real>& pole() const { return pole_; }
  [[nodiscard]] int size() const { return pole_.order(); }
  [[nodiscard]] const VectorX<Scalar>& coefficients() const { return coeffs_; }
  [[nodiscard]] const Scalar& coefficient(int k) const { return coeffs_(k); }
  [[nodiscard]] const Real& elapsed() const { return elapsed_; }

  /// Largest k with a nonzero coefficient, -1 for the zero vector.
  [[nodiscard]] int highest_order() const {
    for (int k = size() - 1; k >= 0; --k)
      if (!is_zero(coeffs_(k))) return k;
    return -1;
  }

  [[nodiscard]] std::complex<double> phase() const {
    const std::complex<double> minus_i(0.0, -1.0);
    return std::exp(minus_i * pole_.position_value() * to_double(elapsed_));
  }

  [[nodiscard]] Eigen::VectorXcd evaluate() const { return phase() * to_std_matrix<Scalar>(coeffs_); }

  friend bool operator==(const GamowChainVector& a, const GamowChainVector& b) {
    return a.size() == b.size() && a.elapsed_ == b.elapsed_ && a.coeffs_ == b.coeffs_;
  }

 private:
  ComplexPole<Real> pole_;
  VectorX<Scalar> coeffs_;
  Real elapsed_;
};

/// Matrix of H restricted to the Gamow span.
template <RealScalar Real>
class JordanBlockMatrix {
 public:
  using Scalar = Complex<Real>;

  explicit JordanBlockMatrix(ComplexPole<Real> pole) : pole_(std::move(pole)) {
    const int r = pole_.order();
    entries_ = MatrixX<Scalar>::Zero(r, r);
    for (int k = 0; k < r; ++k) entries_(k, k) = pole_.position();
    for (int k = 1; k < r; ++k) entries_(k - 1, k) = Scalar(k);
  }

  [[nodiscard]] const ComplexPole<Real>& pole() const { return pole_; }
  [[nodiscard]] int size() const { return pole_.order(); }
  [[nodiscard]] const MatrixX<Scalar>& entries() const { return entries_; }

  /// J - z_R I
  [[nodiscard]] MatrixX<Scalar> nilpotent_part() const {
    MatrixX<Scalar> n = entries_;
    for (int k = 0; k < size(); ++k) n(k, k) -= pole_.position();
    return n;
  }

 private:
  ComplexPole<Real> pole_;
  MatrixX<Scalar> entries_;
};

template <RealScalar Real>
JordanBlockMatrix<Real> build_jordan_block(const ComplexPole<Real>& pole) {
  return JordanBlockMatrix<Real>(pole);
}

struct JordanDegree {
  bool annihilated = false;                    // (J - z_R)^(k+1) e_k == 0
  bool not_annihilated_at_lower_power = false;  // (J - z_R)^k e_k != 0
  [[nodiscard]] bool valid() const { return annihilated && not_annihilated_at_lower_power; }
};

/// Checks that e_k is a Jordan vector of degree k+1.
template <RealScalar Real>
JordanDegree check_jordan_degree(const JordanBlockMatrix<Real>& block, int k) {
  using Scalar = Complex<Real>;
  if (k < 0 || k >= block.size()) throw std::out_of_range("check_jordan_degree: order out of range");
  const MatrixX<Scalar> n = block.nilpotent_part();
  VectorX<Scalar> v = VectorX<Scalar>::Zero(block.size());
  v(k) = Scalar(1);
  for (int p = 0; p < k; ++p) v = n * v;
  JordanDegree out;
  out.not_annihilated_at_lower_power = !is_exact_zero(v);
  v = n * v;
  out.annihilated = is_exact_zero(v);
  return out;
}

/// Polynomial part of exp(-iHt) on the Gamow span:
/// column k holds the coefficients of the evolved |z_R>^(k).
template <RealScalar Real>
MatrixX<Complex<Real>> chain_propagator(int order, const Real& t) {
  using Scalar = Complex<Real>;
  const Scalar minus_it = make_complex<Real>(Real(0), -t);
  MatrixX<Scalar> p = MatrixX<Scalar>::Zero(order, order);
  std::vector<Scalar> powers{Scalar(1)};
  for (int q = 1; q < order; ++q) powers.push_back(powers.back() * minus_it);
  for (int k = 0; k < order; ++k)
    for (int q = 0; q <= k; ++q)
      p(q, k) = powers[static_cast<std::size_t>(k - q)] * binomial_as<Scalar>(k, q);
  return p;
}

/// exp(-iHt)|z_R>^(k) = exp(-i z_R t) sum_p C(k,p) (-it)^(k-p) |z_R>^(p),  t >= 0.
template <RealScalar Real>
GamowChainVector<Real> evolve_ket(const ComplexPole<Real>& pole, int k, const Real& t) {
  if (k < 0 || k >= pole.order()) throw std::out_of_range("evolve_ket: order out of range");
  require_time_nonnegative(t);
  VectorX<Complex<Real>> column = chain_propagator(pole.order(), t).col(k);
  return {pole, std::move(column), t};
}

/// Linear extension of evolve_ket to an arbitrary chain vector.
template <RealScalar Real>
GamowChainVector<Real> evolve(const GamowChainVector<Real>& v, const Real& t) {
  require_time_nonnegative(t);
  VectorX<Complex<Real>> coeffs = chain_propagator(v.size(), t) * v.coefficients();
  return {v.pole(), std::move(coeffs), v.elapsed() + t};
}

/// Component p of the evolved |z_R>^(k) as a polynomial in t
/// (the exp(-i z_R t) factor excluded).
template <typename Scalar>
std::vector<Polynomial<Scalar>> ket_time_polynomials(int order, int k) {
  if (k < 0 || k >= order) throw std::out_of_range("ket_time_polynomials: order out of range");
  std::vector<Polynomial<Scalar>> out(static_cast<std::size_t>(order));
  const Scalar minus_i = -imaginary_unit<Scalar>();
  for (int p = 0; p <= k; ++p) {
    const Scalar c = int_power(minus_i, static_cast<unsigned>(k - p)) * binomial_as<Scalar>(k, p);
    out[static_cast<std::size_t>(p)] = Polynomial<Scalar>::monomial(c, k - p);
  }
  return out;
}

/// |exp(-i z_R t)|^2 = exp(-Gamma t)
template <RealScalar Real>
double survival_modulus(const ComplexPole<Real>& pole, const Real& t) {
  require_time_nonnegative(t);
  const std::complex<double> minus_i(0.0, -1.0);
  return std::norm(std::exp(minus_i * pole.position_value() * to_double(t)));
}

}  // namespace gamow
