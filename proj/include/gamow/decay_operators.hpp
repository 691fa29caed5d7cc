#pragma once

// Operators built from dyads |z_R>^(k) (m)<z_R| on the Gamow span, their
// exact time evolution, and the characterization of the coefficient
// families whose evolution is a pure exp(-Gamma t).
//
// Storage convention: an operator is the r x r matrix `ket_bra` with
// ket_bra(k, m) the coefficient of |k><m|. In the B-table notation
// W = sum B_{m,k} |k><m|, so B_{m,k} = ket_bra(k, m). The A-table groups
// dyads by total order n = k + m: A_{n,k} = B_{n-k,k}.
//
// Bras evolve with the conjugate of the ket propagator. The ket phase
// exp(-i z_R t) times the bra phase exp(+i conj(z_R) t) is exp(-Gamma t),
// so an evolved operator is exp(-Gamma t) * sum_p t^p M_p with every M_p
// exact.

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

#include "gamow/combinatorics.hpp"
#include "gamow/exact.hpp"
#include "gamow/jordan_core.hpp"
#include "gamow/linear_algebra.hpp"
#include "gamow/polynomial.hpp"

namespace gamow {

enum class CoefficientForm { B, A };

/// B_{m,k} table (bound r) or lower-triangular A_{n,k} table (bound j).
template <RealScalar Real>
class CoefficientMatrix {
 public:
  using Scalar = Complex<Real>;

  static CoefficientMatrix b_form(int order) {
    if (order < 1) throw std::domain_error("CoefficientMatrix: order must be at least 1");
    return CoefficientMatrix(CoefficientForm::B, order, MatrixX<Scalar>::Zero(order, order));
  }

  static CoefficientMatrix a_form(int bound) {
    if (bound < 0) throw std::domain_error("CoefficientMatrix: order bound must be nonnegative");
    return CoefficientMatrix(CoefficientForm::A, bound, MatrixX<Scalar>::Zero(bound + 1, bound + 1));
  }

  /// entries(m, k) = B_{m,k}
  static CoefficientMatrix b_form(MatrixX<Scalar> entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
      throw std::invalid_argument("CoefficientMatrix: B table must be square and nonempty");
    const int r = static_cast<int>(entries.rows());
    return CoefficientMatrix(CoefficientForm::B, r, std::move(entries));
  }

  /// entries(n, k) = A_{n,k}; must vanish above the diagonal.
  static CoefficientMatrix a_form(MatrixX<Scalar> entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
      throw std::invalid_argument("CoefficientMatrix: A table must be square and nonempty");
    for (Eigen::Index n = 0; n < entries.rows(); ++n)
      for (Eigen::Index k = n + 1; k < entries.cols(); ++k)
        if (!is_zero(entries(n, k))) throw std::invalid_argument("CoefficientMatrix: A table has entries with k > n");
    const int j = static_cast<int>(entries.rows()) - 1;
    return CoefficientMatrix(CoefficientForm::A, j, std::move(entries));
  }

  [[nodiscard]] CoefficientForm form() const { return form_; }
  /// r for the B form, j for the A form.
  [[nodiscard]] int bound() const { return bound_; }
  [[nodiscard]] const MatrixX<Scalar>& entries() const { return entries_; }

  [[nodiscard]] const Scalar& operator()(int i, int k) const {
    check_index(i, k);
    return entries_(i, k);
  }

  void set(int i, int k, Scalar value) {
    check_index(i, k);
    entries_(i, k) = std::move(value);
  }

  /// B -> A with j = 2(r-1): A_{n,k} = B_{n-k,k}, zero when n-k or k exceeds r-1.
  [[nodiscard]] CoefficientMatrix to_a_form() const {
    if (form_ == CoefficientForm::A) return *this;
    const int r = bound_;
    CoefficientMatrix a = a_form(2 * (r - 1));
    for (int n = 0; n <= a.bound(); ++n)
      for (int k = 0; k <= n; ++k)
        if (k <= r - 1 && n - k <= r - 1) a.entries_(n, k) = entries_(n - k, k);
    return a;
  }

 private:
  CoefficientMatrix(CoefficientForm form, int bound, MatrixX<Scalar> entries)
      : form_(form), bound_(bound), entries_(std::move(entries)) {}

  void check_index(int i, int k) const {
    const bool in_table = i >= 0 && k >= 0 && i < entries_.rows() && k < entries_.cols();
    if (!in_table || (form_ == CoefficientForm::A && k > i))
      throw std::out_of_range("CoefficientMatrix: index out of range");
  }

  CoefficientForm form_;
  int bound_;
  MatrixX<Scalar> entries_;
};

template <RealScalar Real>
class DyadicOperator {
 public:
  using Scalar = Complex<Real>;

  /// `coefficient_dimensions(k, m)` is the [energy] exponent carried by the
  /// coefficient of |k><m|. Nonzero terms must combine to one total dimension.
  DyadicOperator(ComplexPole<Real> pole, MatrixX<Scalar> ket_bra, Eigen::MatrixXi coefficient_dimensions)
      : pole_(std::move(pole)), ket_bra_(std::move(ket_bra)), dims_(std::move(coefficient_dimensions)) {
    const int r = pole_.order();
    if (ket_bra_.rows() != r || ket_bra_.cols() != r || dims_.rows() != r || dims_.cols() != r)
      throw std::invalid_argument("DyadicOperator: tables must be r x r");
    std::optional<int> total;
    for (int k = 0; k < r; ++k) {
      for (int m = 0; m < r; ++m) {
        if (gamow::is_zero(ket_bra_(k, m))) continue;
        const int d = dims_(k, m) - 1 - k - m;
        if (total && *total != d) throw std::invalid_argument("DyadicOperator: dimensionally inhomogeneous terms");
        total = d;
      }
    }
    total_dimension_ = total;
  }

  /// Coefficient dimensions k + m, which makes every term carry [energy]^-1.
  static Eigen::MatrixXi natural_dimensions(int order) {
    Eigen::MatrixXi d(order, order);
    for (int k = 0; k < order; ++k)
      for (int m = 0; m < order; ++m) d(k, m) = k + m;
    return d;
  }

  /// |k><m| carries [energy]^(-1 - k - m).
  static EnergyDimension dyad_dimension(int k, int m) {
    return GamowChainVector<Real>::dimension(k) + GamowChainVector<Real>::dimension(m);
  }

  [[nodiscard]] const ComplexPole<Real>& pole() const { return pole_; }
  [[nodiscard]] int order() const { return pole_.order(); }
  [[nodiscard]] const MatrixX<Scalar>& ket_bra() const { return ket_bra_; }
  [[nodiscard]] const Eigen::MatrixXi& coefficient_dimensions() const { return dims_; }
  /// Exponent of [energy] shared by all nonzero terms; empty for the zero operator.
  [[nodiscard]] std::optional<int> total_dimension() const { return total_dimension_; }
  [[nodiscard]] bool is_zero() const { return is_exact_zero(ket_bra_); }

  [[nodiscard]] const Scalar& b(int m, int k) const { return ket_bra_(k, m); }

  [[nodiscard]] CoefficientMatrix<Real> coefficients() const {
    return CoefficientMatrix<Real>::b_form(MatrixX<Scalar>(ket_bra_.transpose()));
  }

  friend bool operator==(const DyadicOperator& a, const DyadicOperator& b) {
    return a.order() == b.order() && a.ket_bra_ == b.ket_bra_;
  }

 private:
  ComplexPole<Real> pole_;
  MatrixX<Scalar> ket_bra_;
  Eigen::MatrixXi dims_;
  std::optional<int> total_dimension_;
};

/// W^(n) = (Gamma^n / n!) sum_k C(n,k) |k><n-k|; the prefactor is optional.
template <RealScalar Real>
DyadicOperator<Real> build_W_n(const ComplexPole<Real>& pole, int n, bool include_prefactor) {
  using Scalar = Complex<Real>;
  const int r = pole.order();
  if (n < 0 || n >= r) throw std::out_of_range("build_W_n: n must lie in [0, r-1]");
  Scalar prefactor(1);
  if (include_prefactor) {
    Real p(1);
    for (int i = 1; i <= n; ++i) p = p * pole.width() / Real(i);
    prefactor = Scalar(p);
  }
  MatrixX<Scalar> ket_bra = MatrixX<Scalar>::Zero(r, r);
  for (int k = 0; k <= n; ++k) ket_bra(k, n - k) = prefactor * binomial_as<Scalar>(n, k);
  Eigen::MatrixXi dims = Eigen::MatrixXi::Constant(r, r, include_prefactor ? n : 0);
  return {pole, std::move(ket_bra), std::move(dims)};
}

/// Operator with exactly the given B or A table. A-form entries that refer
/// to kets or bras of order >= r are rejected.
template <RealScalar Real>
DyadicOperator<Real> build_general_W(const ComplexPole<Real>& pole, const CoefficientMatrix<Real>& coeffs,
                                     std::optional<Eigen::MatrixXi> dimensions = std::nullopt) {
  using Scalar = Complex<Real>;
  const int r = pole.order();
  MatrixX<Scalar> ket_bra = MatrixX<Scalar>::Zero(r, r);
  if (coeffs.form() == CoefficientForm::B) {
    if (coeffs.bound() != r) throw std::out_of_range("build_general_W: B table size differs from pole order");
    ket_bra = coeffs.entries().transpose();
  } else {
    for (int n = 0; n <= coeffs.bound(); ++n) {
      for (int k = 0; k <= n; ++k) {
        const Scalar& a = coeffs(n, k);
        if (is_zero(a)) continue;
        if (k >= r || n - k >= r) throw std::out_of_range("build_general_W: A entry refers to an order >= r");
        ket_bra(k, n - k) = a;
      }
    }
  }
  Eigen::MatrixXi dims = dimensions ? std::move(*dimensions) : DyadicOperator<Real>::natural_dimensions(r);
  return {pole, std::move(ket_bra), std::move(dims)};
}

/// exp(-Gamma t) * sum_p t^p M_p
template <RealScalar Real>
class TimePolynomialOperator {
 public:
  using Scalar = Complex<Real>;

  TimePolynomialOperator(ComplexPole<Real> pole, std::vector<MatrixX<Scalar>> powers)
      : pole_(std::move(pole)), powers_(std::move(powers)) {
    const int r = pole_.order();
    if (powers_.empty()) powers_.push_back(MatrixX<Scalar>::Zero(r, r));
    for (const auto& m : powers_)
      if (m.rows() != r || m.cols() != r) throw std::invalid_argument("TimePolynomialOperator: tables must be r x r");
    while (powers_.size() > 1 && is_exact_zero(powers_.back())) powers_.pop_back();
  }

  [[nodiscard]] const ComplexPole<Real>& pole() const { return pole_; }
  [[nodiscard]] int order() const { return pole_.order(); }
  /// Highest power of t with a nonzero coefficient (0 for constant tables).
  [[nodiscard]] int degree() const { return static_cast<int>(powers_.size()) - 1; }

  [[nodiscard]] MatrixX<Scalar> coefficient_of_power(int p) const {
    if (p < 0) throw std::out_of_range("TimePolynomialOperator: negative power");
    if (p > degree()) return MatrixX<Scalar>::Zero(order(), order());
    return powers_[static_cast<std::size_t>(p)];
  }

  [[nodiscard]] const MatrixX<Scalar>& at_zero() const { return powers_.front(); }

  /// Polynomial multiplying exp(-Gamma t) in front of |l><m|.
  [[nodiscard]] Polynomial<Scalar> entry(int l, int m) const {
    VectorX<Scalar> c(static_cast<Eigen::Index>(powers_.size()));
    for (std::size_t p = 0; p < powers_.size(); ++p) c(static_cast<Eigen::Index>(p)) = powers_[p](l, m);
    return Polynomial<Scalar>(std::move(c));
  }

  [[nodiscard]] Eigen::MatrixXcd polynomial_value(double t) const {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(order(), order());
    for (std::size_t p = powers_.size(); p-- > 0;) acc = acc * t + to_std_matrix<Scalar>(powers_[p]);
    return acc;
  }

  /// Numerical value of the evolved operator at time t >= 0.
  [[nodiscard]] Eigen::MatrixXcd evaluate(double t) const {
    if (t < 0.0) throw std::domain_error("time evolution is only defined for t >= 0");
    return std::exp(-to_double(pole_.width()) * t) * polynomial_value(t);
  }

 private:
  ComplexPole<Real> pole_;
  std::vector<MatrixX<Scalar>> powers_;
};

/// Exact evolution W(t) = exp(-iHt) W exp(-iHt)^dagger, regrouped by dyad:
/// the t^(n-l-m) coefficient of |l><m| is
///   i^(n-l-m) * sum_{k=l}^{n-m} A_{n,k} C(k,l) C(n-k,m) (-1)^(k-l).
template <RealScalar Real>
TimePolynomialOperator<Real> evolve_operator(const DyadicOperator<Real>& op) {
  using Scalar = Complex<Real>;
  const int r = op.order();
  if (r == 1) return {op.pole(), {op.ket_bra()}};

  const MatrixX<Scalar> a = op.coefficients().to_a_form().entries();
  const int j = 2 * (r - 1);
  const Scalar i = imaginary_unit<Scalar>();
  std::vector<MatrixX<Scalar>> powers(static_cast<std::size_t>(j + 1), MatrixX<Scalar>::Zero(r, r));
  for (int l = 0; l < r; ++l) {
    for (int m = 0; m < r; ++m) {
      for (int n = l + m; n <= j; ++n) {
        Scalar sum(0);
        for (int k = l; k <= n - m; ++k) {
          if (is_zero(a(n, k))) continue;
          Scalar term = a(n, k) * binomial_as<Scalar>(k, l) * binomial_as<Scalar>(n - k, m);
          sum += ((k - l) % 2 == 0) ? term : -term;
        }
        const int p = n - m - l;
        powers[static_cast<std::size_t>(p)](l, m) += int_power(i, static_cast<unsigned>(p)) * sum;
      }
    }
  }
  return {op.pole(), std::move(powers)};
}

/// True iff no entry carries a positive power of t (exact comparison).
template <RealScalar Real>
bool is_pure_exponential(const TimePolynomialOperator<Real>& evolved) {
  for (int p = 1; p <= evolved.degree(); ++p)
    if (!is_exact_zero(evolved.coefficient_of_power(p))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Constraint system on the A table.

struct ConstraintTerm {
  int n = 0;
  int k = 0;
  Rational coefficient;
};

/// 0 = sum_{k=l}^{n-m} A_{n,k} C(k,l) C(n-k,m) (-1)^(k-l)
struct ConstraintEquation {
  int l = 0;
  int m = 0;
  int n = 0;
  std::vector<ConstraintTerm> terms;
};

class ConstraintSystem {
 public:
  ConstraintSystem(int order_bound, std::vector<ConstraintEquation> equations);

  [[nodiscard]] int order_bound() const { return j_; }
  [[nodiscard]] const std::vector<ConstraintEquation>& equations() const { return equations_; }
  [[nodiscard]] int equation_count() const { return static_cast<int>(equations_.size()); }
  [[nodiscard]] int variable_count() const { return (j_ + 1) * (j_ + 2) / 2; }

  /// Column of A_{n,k}: variables ordered by n, then k.
  static int variable_index(int n, int k) { return n * (n + 1) / 2 + k; }

  /// equation_count x variable_count coefficient matrix.
  [[nodiscard]] MatrixX<Rational> matrix() const;

  /// dim ker(matrix()), the number of free coefficients.
  [[nodiscard]] int solution_dimension() const;

  /// True iff the A table (n, k) satisfies every equation exactly.
  [[nodiscard]] bool is_satisfied_by(const MatrixX<Rational>& a_table) const;

 private:
  int j_;
  std::vector<ConstraintEquation> equations_;
};

/// All conditions for the cancellation of positive powers of t, for dyads
/// of total order <= j. Loop order: l, then m, then n.
ConstraintSystem exponentiality_constraints(int j);

/// Parametric solution A_{n,k} = multipliers(n, k) * A_{n,0} obtained by
/// chaining A_{n,k} = [(n-k+1)!(k-1)! / ((n-k)! k!)] A_{n,k-1}.
struct BinomialSolution {
  int order_bound = 0;
  MatrixX<Rational> multipliers;
  bool satisfies_constraints = false;

  /// A table for the given free parameters A_{0,0}..A_{j,0}.
  template <RealScalar Real>
  CoefficientMatrix<Real> instantiate(const VectorX<Complex<Real>>& free_parameters) const {
    using Scalar = Complex<Real>;
    if (free_parameters.size() != order_bound + 1)
      throw std::invalid_argument("BinomialSolution: expected j+1 free parameters");
    CoefficientMatrix<Real> a = CoefficientMatrix<Real>::a_form(order_bound);
    for (int n = 0; n <= order_bound; ++n)
      for (int k = 0; k <= n; ++k) {
        Scalar mult;
        if constexpr (std::is_same_v<Real, Rational>) {
          mult = Scalar(multipliers(n, k));
        } else {
          mult = Scalar(multipliers(n, k).to_double());
        }
        a.set(n, k, free_parameters(n) * mult);
      }
    return a;
  }
};

BinomialSolution solve_binomial_recursion(int j);

/// Exact nullspace of the constraint system for bound j. The basis is
/// computed with the A_{n,0} columns ordered last, so each basis vector has
/// A_{n',0} = [n' == n]; it is compared with A_{n,k} = C(n,k) A_{n,0}.
struct CharacterizationReport {
  int order_bound = 0;
  int equation_count = 0;
  int variable_count = 0;
  int solution_dimension = 0;
  std::vector<MatrixX<Rational>> nullspace_basis;  // A tables (n, k)
  bool matches_binomial_pattern = false;
  bool recursion_satisfies_constraints = false;

  [[nodiscard]] bool reproduced() const {
    return solution_dimension == order_bound + 1 && matches_binomial_pattern && recursion_satisfies_constraints;
  }
};

CharacterizationReport characterize_exponential_operators(int j);

/// Same nullspace computation restricted to B tables of an order-r pole
/// (j = 2(r-1), A_{n,k} = B_{n-k,k}, unavailable entries fixed to zero).
struct RestrictionReport {
  int order = 0;
  int order_bound = 0;
  int solution_dimension = 0;
  std::vector<MatrixX<Rational>> nullspace_basis;  // B tables (m, k)
  std::vector<MatrixX<Rational>> expected_basis;   // B_{m,k} = C(k+m,k) [k+m == n]
  bool matches_restriction = false;

  [[nodiscard]] bool reproduced() const { return solution_dimension == order && matches_restriction; }
};

RestrictionReport verify_restriction_equivalence(int r);

template <RealScalar Real>
RestrictionReport verify_restriction_equivalence(const ComplexPole<Real>& pole) {
  return verify_restriction_equivalence(pole.order());
}

/// The r operators sum_k C(n,k) |k><n-k|, n = 0..r-1. Throws std::logic_error
/// if any fails to evolve as a pure exponential or if they are dependent.
template <RealScalar Real>
std::vector<DyadicOperator<Real>> exponential_subspace_basis(const ComplexPole<Real>& pole) {
  using Scalar = Complex<Real>;
  const int r = pole.order();
  std::vector<DyadicOperator<Real>> basis;
  basis.reserve(static_cast<std::size_t>(r));
  MatrixX<Scalar> stacked(r * r, r);
  for (int n = 0; n < r; ++n) {
    basis.push_back(build_W_n(pole, n, false));
    if (!is_pure_exponential(evolve_operator(basis.back())))
      throw std::logic_error("exponential_subspace_basis: element is not a pure exponential");
    stacked.col(n) = basis.back().ket_bra().reshaped();
  }
  Eigen::Index rank = 0;
  if constexpr (std::is_same_v<Real, Rational>) {
    rank = exact_rank(stacked);
  } else {
    rank = Eigen::FullPivLU<MatrixX<Scalar>>(stacked).rank();
  }
  if (rank != r) throw std::logic_error("exponential_subspace_basis: elements are linearly dependent");
  return basis;
}

}  // namespace gamow
