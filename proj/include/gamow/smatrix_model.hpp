#pragma once

// Rational S-matrix with an order-r pole at z_R in the lower half-plane,
//   S(z) = sum_{n=0}^{r-1} a_{-n-1} / (z - z_R)^(n+1) + background(z),
// and the pole contribution to (psi, phi) = int dE f(E) S(E) g(E) written as
//   -2 pi i sum_n a_{-n-1}/n! sum_k C(n,k) f^(n-k)(z_R) g^(k)(z_R).
//
// f and g are rational stand-ins for <psi^-|z^-> and <+z|phi^+> with all
// poles in the open upper half-plane. For such integrands the real line
// closed through the lower half-plane encloses only z_R, so
//   int_0^inf F dE = int_0^{-inf} F dE + residue term
// holds exactly; `decomposition_check` verifies it numerically.

#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gamow/combinatorics.hpp"
#include "gamow/exact.hpp"
#include "gamow/jordan_core.hpp"
#include "gamow/polynomial.hpp"

namespace gamow {

/// Numerical roots via the companion matrix.
template <typename Scalar>
std::vector<std::complex<double>> polynomial_roots(const Polynomial<Scalar>& p) {
  const int d = p.degree();
  if (d < 1) return {};
  const std::complex<double> lead = to_std_complex(p.leading());
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -to_std_complex(p.coefficient(i)) / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  const Eigen::VectorXcd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// A root counts as lying in the open upper half-plane if its imaginary part
/// exceeds this fraction of max(1, |root|).
inline constexpr double kHalfPlaneMargin = 1e-9;

inline bool in_open_upper_half_plane(std::complex<double> z) {
  return z.imag() > kHalfPlaneMargin * std::max(1.0, std::abs(z));
}

enum class FunctionRole { Ket, Bra };

template <RealScalar Real>
class TestFunction {
 public:
  using Scalar = Complex<Real>;

  /// Rejects functions with a pole in the closed lower half-plane.
  TestFunction(RationalFunction<Scalar> fn, FunctionRole role) : fn_(std::move(fn)), role_(role) {
    poles_ = polynomial_roots(fn_.denominator());
    for (const auto& p : poles_)
      if (!in_open_upper_half_plane(p))
        throw std::invalid_argument("TestFunction: singularity in the closed lower half-plane");
  }

  /// numerator(z) / prod_i (z - poles_i). The pole positions are checked exactly.
  static TestFunction from_poles(Polynomial<Scalar> numerator, const std::vector<Scalar>& poles, FunctionRole role) {
    for (const auto& p : poles) {
      bool upper = false;
      if constexpr (std::is_same_v<Real, Rational>) {
        upper = p.imag() > Rational(0);
      } else {
        upper = p.imag() > 0.0;
      }
      if (!upper) throw std::invalid_argument("TestFunction: singularity in the closed lower half-plane");
    }
    return TestFunction(RationalFunction<Scalar>(std::move(numerator), Polynomial<Scalar>::from_roots(poles)), role);
  }

  [[nodiscard]] const RationalFunction<Scalar>& function() const { return fn_; }
  [[nodiscard]] FunctionRole role() const { return role_; }
  [[nodiscard]] int decay_order() const { return fn_.decay_order(); }
  [[nodiscard]] const std::vector<std::complex<double>>& poles() const { return poles_; }

  template <typename Arg>
  [[nodiscard]] Scalar operator()(const Arg& z) const {
    return fn_(z);
  }

  /// Wavefunctions carry [energy]^(-1/2).
  static EnergyDimension dimension() { return EnergyDimension::from_half_units(-1); }

 private:
  RationalFunction<Scalar> fn_;
  FunctionRole role_;
  std::vector<std::complex<double>> poles_;
};

template <RealScalar Real>
class SMatrixModel {
 public:
  using Scalar = Complex<Real>;

  /// `laurent[n]` is a_{-n-1}. Either every coefficient is zero (no pole
  /// contribution) or a_{-r} must be nonzero.
  SMatrixModel(ComplexPole<Real> pole, std::vector<Scalar> laurent,
               RationalFunction<Scalar> background = RationalFunction<Scalar>())
      : pole_(std::move(pole)), laurent_(std::move(laurent)), background_(std::move(background)) {
    if (static_cast<int>(laurent_.size()) != pole_.order())
      throw std::invalid_argument("SMatrixModel: need exactly r Laurent coefficients");
    if (has_pole() && is_zero(laurent_.back()))
      throw std::invalid_argument("SMatrixModel: a_{-r} vanishes, pole order is lower than declared");
    background_poles_ = polynomial_roots(background_.denominator());
    for (const auto& p : background_poles_)
      if (!in_open_upper_half_plane(p))
        throw std::invalid_argument("SMatrixModel: background has a singularity in the closed lower half-plane");
  }

  /// First-order pole with a_{-1} = -i Gamma.
  static SMatrixModel with_unitarity_default(const ComplexPole<Real>& pole) {
    if (pole.order() != 1) throw std::invalid_argument("SMatrixModel: unitarity default only covers r = 1");
    return SMatrixModel(pole, {make_complex<Real>(Real(0), -pole.width())});
  }

  [[nodiscard]] const ComplexPole<Real>& pole() const { return pole_; }
  [[nodiscard]] int order() const { return pole_.order(); }
  [[nodiscard]] const std::vector<Scalar>& laurent() const { return laurent_; }
  /// a_{-n-1}
  [[nodiscard]] const Scalar& laurent(int n) const { return laurent_.at(static_cast<std::size_t>(n)); }
  [[nodiscard]] const RationalFunction<Scalar>& background() const { return background_; }
  [[nodiscard]] const std::vector<std::complex<double>>& background_poles() const { return background_poles_; }

  [[nodiscard]] bool has_pole() const {
    for (const auto& a : laurent_)
      if (!is_zero(a)) return true;
    return false;
  }

  /// a_{-n-1} carries [energy]^(n+1).
  static EnergyDimension laurent_dimension(int n) { return EnergyDimension::of_power(n + 1); }

  /// Decay rate of |S| at infinity along the real axis.
  [[nodiscard]] int decay_order() const {
    const int pole_decay = has_pole() ? 1 : std::numeric_limits<int>::max();
    return std::min(pole_decay, background_.decay_order());
  }

  [[nodiscard]] Scalar operator()(const Scalar& z) const {
    const Scalar zr = pole_.position();
    if (z == zr) throw std::domain_error("SMatrixModel: evaluation at the pole");
    const Scalar inv = Scalar(1) / (z - zr);
    Scalar acc(0);
    Scalar power = inv;
    for (const auto& a : laurent_) {
      acc += a * power;
      power *= inv;
    }
    return acc + background_(z);
  }

 private:
  ComplexPole<Real> pole_;
  std::vector<Scalar> laurent_;
  RationalFunction<Scalar> background_;
  std::vector<std::complex<double>> background_poles_;
};

template <RealScalar Real>
Complex<Real> evaluate_S(const SMatrixModel<Real>& model, const Complex<Real>& z) {
  return model(z);
}

/// sum_n a_{-n-1}/n! sum_k C(n,k) f^(n-k)(z_R) g^(k)(z_R); exact for rational inputs.
/// The residue term is -2 pi i times this value.
template <RealScalar Real>
Complex<Real> residue_sum(const SMatrixModel<Real>& model, const TestFunction<Real>& ket,
                          const TestFunction<Real>& bra) {
  using Scalar = Complex<Real>;
  if (ket.role() != FunctionRole::Ket || bra.role() != FunctionRole::Bra)
    throw std::invalid_argument("residue_sum: expected a ket-side and a bra-side test function");
  const int r = model.order();
  const Scalar zr = model.pole().position();

  std::vector<Scalar> f_derivs;
  std::vector<Scalar> g_derivs;
  RationalFunction<Scalar> f = ket.function();
  RationalFunction<Scalar> g = bra.function();
  for (int d = 0; d < r; ++d) {
    f_derivs.push_back(f(zr));
    g_derivs.push_back(g(zr));
    if (d + 1 < r) {
      f = f.derivative();
      g = g.derivative();
    }
  }

  Scalar total(0);
  for (int n = 0; n < r; ++n) {
    if (is_zero(model.laurent(n))) continue;
    Scalar leibniz(0);
    for (int k = 0; k <= n; ++k)
      leibniz += binomial_as<Scalar>(n, k) * f_derivs[static_cast<std::size_t>(n - k)] *
                 g_derivs[static_cast<std::size_t>(k)];
    total += model.laurent(n) * leibniz / factorial_as<Scalar>(n);
  }
  return total;
}

/// Residue term -2 pi i * residue_sum.
template <RealScalar Real>
std::complex<double> residue_expansion(const SMatrixModel<Real>& model, const TestFunction<Real>& ket,
                                       const TestFunction<Real>& bra) {
  const std::complex<double> minus_two_pi_i(0.0, -2.0 * std::numbers::pi);
  return minus_two_pi_i * to_std_complex(residue_sum(model, ket, bra));
}

/// Dimension of the (n, k) residue term: a_{-n-1} f^(n-k) g^(k).
inline EnergyDimension residue_term_dimension(int n, int k) {
  return SMatrixModel<double>::laurent_dimension(n) + TestFunction<double>::dimension() +
         TestFunction<double>::dimension() - EnergyDimension::of_power(n - k) - EnergyDimension::of_power(k);
}

// ---------------------------------------------------------------------------
// Quadrature on the real axis (floating point only).

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  unsigned max_depth = 15;
  /// Upper limit of the direct integral; infinity integrates the full half-line.
  double e_max = std::numeric_limits<double>::infinity();
  /// Breakpoints are placed out to this many widths around every integrand pole.
  double refinement_widths = 10.0;
};

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  double l1_norm = 0.0;
  bool converged = false;
};

/// int_0^{E_max} f(E) S(E) g(E) dE
QuadratureResult direct_contour_integral(const SMatrixModel<double>& model, const TestFunction<double>& ket,
                                         const TestFunction<double>& bra, const QuadratureConfig& config = {});

/// int_0^{-inf} f(E) S(E) g(E) dE, the negative-axis leg of the deformed contour.
QuadratureResult background_integral(const SMatrixModel<double>& model, const TestFunction<double>& ket,
                                     const TestFunction<double>& bra, const QuadratureConfig& config = {});

struct DecompositionReport {
  std::complex<double> direct;
  std::complex<double> background;
  std::complex<double> residue;
  double direct_error = 0.0;
  double background_error = 0.0;
  /// |direct - (background + residue)| / |direct| (absolute when direct == 0)
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool quadrature_converged = false;
  bool passed = false;
};

/// Compares the direct half-line integral with background + residue. The
/// direct integral always runs over the full half-line here, whatever
/// config.e_max says, since the identity is exact only for the closed contour.
DecompositionReport decomposition_check(const SMatrixModel<double>& model, const TestFunction<double>& ket,
                                        const TestFunction<double>& bra, const QuadratureConfig& config = {},
                                        double tolerance = 1e-8);

}  // namespace gamow
