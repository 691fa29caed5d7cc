#include "gamow/decay_operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace gamow {

ConstraintSystem::ConstraintSystem(int order_bound, std::vector<ConstraintEquation> equations)
    : j_(order_bound), equations_(std::move(equations)) {
  if (j_ < 0) throw std::domain_error("ConstraintSystem: order bound must be nonnegative");
  for (const auto& eq : equations_)
    for (const auto& term : eq.terms)
      if (term.n < 0 || term.n > j_ || term.k < 0 || term.k > term.n)
        throw std::out_of_range("ConstraintSystem: term refers to a coefficient outside the A table");
}

MatrixX<Rational> ConstraintSystem::matrix() const {
  MatrixX<Rational> m = MatrixX<Rational>::Zero(equation_count(), variable_count());
  for (int row = 0; row < equation_count(); ++row)
    for (const auto& term : equations_[static_cast<std::size_t>(row)].terms)
      m(row, variable_index(term.n, term.k)) += term.coefficient;
  return m;
}

int ConstraintSystem::solution_dimension() const {
  return variable_count() - static_cast<int>(exact_rank(matrix()));
}

bool ConstraintSystem::is_satisfied_by(const MatrixX<Rational>& a_table) const {
  if (a_table.rows() != j_ + 1 || a_table.cols() != j_ + 1)
    throw std::invalid_argument("ConstraintSystem: A table must be (j+1) x (j+1)");
  return std::all_of(equations_.begin(), equations_.end(), [&](const ConstraintEquation& eq) {
    Rational sum;
    for (const auto& term : eq.terms) sum += term.coefficient * a_table(term.n, term.k);
    return sum.is_zero();
  });
}

ConstraintSystem exponentiality_constraints(int j) {
  if (j < 0) throw std::domain_error("exponentiality_constraints: j must be nonnegative");
  std::vector<ConstraintEquation> equations;
  for (int l = 0; l <= j - 1; ++l) {
    for (int m = 0; m <= j - 1 - l; ++m) {
      for (int n = m + l + 1; n <= j; ++n) {
        ConstraintEquation eq{l, m, n, {}};
        for (int k = l; k <= n - m; ++k) {
          BigInt c = binomial(k, l) * binomial(n - k, m);
          if ((k - l) % 2 != 0) c = -c;
          eq.terms.push_back({n, k, Rational(c, BigInt(1))});
        }
        equations.push_back(std::move(eq));
      }
    }
  }
  return {j, std::move(equations)};
}

BinomialSolution solve_binomial_recursion(int j) {
  if (j < 0) throw std::domain_error("solve_binomial_recursion: j must be nonnegative");
  BinomialSolution out;
  out.order_bound = j;
  out.multipliers = MatrixX<Rational>::Zero(j + 1, j + 1);
  for (int n = 0; n <= j; ++n) {
    out.multipliers(n, 0) = Rational(1);
    for (int k = 1; k <= n; ++k) {
      const Rational step(factorial(n - k + 1) * factorial(k - 1), factorial(n - k) * factorial(k));
      out.multipliers(n, k) = step * out.multipliers(n, k - 1);
    }
  }

  const ConstraintSystem system = exponentiality_constraints(j);
  out.satisfies_constraints = true;
  for (int n = 0; n <= j && out.satisfies_constraints; ++n) {
    MatrixX<Rational> a = MatrixX<Rational>::Zero(j + 1, j + 1);
    a.row(n) = out.multipliers.row(n);
    out.satisfies_constraints = system.is_satisfied_by(a);
  }
  return out;
}

namespace {

// Nullspace of selected columns of `m`, with `order` listing the columns to
// use (free parameters last). Returns basis vectors indexed like `order`.
MatrixX<Rational> ordered_nullspace(const MatrixX<Rational>& m, const std::vector<int>& order) {
  MatrixX<Rational> permuted(m.rows(), static_cast<Eigen::Index>(order.size()));
  for (std::size_t c = 0; c < order.size(); ++c) permuted.col(static_cast<Eigen::Index>(c)) = m.col(order[c]);
  return nullspace_basis(permuted);
}

}  // namespace

CharacterizationReport characterize_exponential_operators(int j) {
  const ConstraintSystem system = exponentiality_constraints(j);
  CharacterizationReport report;
  report.order_bound = j;
  report.equation_count = system.equation_count();
  report.variable_count = system.variable_count();
  report.recursion_satisfies_constraints = solve_binomial_recursion(j).satisfies_constraints;

  std::vector<int> order;
  for (int n = 0; n <= j; ++n)
    for (int k = 1; k <= n; ++k) order.push_back(ConstraintSystem::variable_index(n, k));
  for (int n = 0; n <= j; ++n) order.push_back(ConstraintSystem::variable_index(n, 0));

  const MatrixX<Rational> kernel = ordered_nullspace(system.matrix(), order);
  report.solution_dimension = static_cast<int>(kernel.cols());

  bool matches = report.solution_dimension == j + 1;
  for (Eigen::Index b = 0; b < kernel.cols(); ++b) {
    MatrixX<Rational> a = MatrixX<Rational>::Zero(j + 1, j + 1);
    for (std::size_t c = 0; c < order.size(); ++c) {
      const int var = order[c];
      int n = 0;
      while (ConstraintSystem::variable_index(n + 1, 0) <= var) ++n;
      a(n, var - ConstraintSystem::variable_index(n, 0)) = kernel(static_cast<Eigen::Index>(c), b);
    }
    if (matches) {
      const int n_free = static_cast<int>(b);
      for (int n = 0; n <= j; ++n)
        for (int k = 0; k <= n; ++k) {
          const Rational expected = n == n_free ? Rational(binomial(n, k), BigInt(1)) : Rational(0);
          if (!(a(n, k) == expected)) matches = false;
        }
    }
    report.nullspace_basis.push_back(std::move(a));
  }
  report.matches_binomial_pattern = matches;
  return report;
}

RestrictionReport verify_restriction_equivalence(int r) {
  if (r < 1) throw std::domain_error("verify_restriction_equivalence: r must be at least 1");
  const int j = 2 * (r - 1);
  const ConstraintSystem system = exponentiality_constraints(j);

  // Unknowns B_{m,k}, m,k < r, i.e. A_{m+k,k}; B_{n,0} columns last.
  std::vector<std::pair<int, int>> unknowns;  // (m, k)
  for (int m = 0; m < r; ++m)
    for (int k = 1; k < r; ++k) unknowns.emplace_back(m, k);
  for (int m = 0; m < r; ++m) unknowns.emplace_back(m, 0);
  std::vector<int> order;
  for (auto [m, k] : unknowns) order.push_back(ConstraintSystem::variable_index(m + k, k));

  const MatrixX<Rational> kernel = ordered_nullspace(system.matrix(), order);

  RestrictionReport report;
  report.order = r;
  report.order_bound = j;
  report.solution_dimension = static_cast<int>(kernel.cols());
  for (int n = 0; n < r; ++n) {
    MatrixX<Rational> expected = MatrixX<Rational>::Zero(r, r);
    for (int k = 0; k <= n; ++k) expected(n - k, k) = Rational(binomial(n, k), BigInt(1));
    report.expected_basis.push_back(std::move(expected));
  }
  bool matches = report.solution_dimension == r;
  for (Eigen::Index b = 0; b < kernel.cols(); ++b) {
    MatrixX<Rational> table = MatrixX<Rational>::Zero(r, r);
    for (std::size_t c = 0; c < unknowns.size(); ++c)
      table(unknowns[c].first, unknowns[c].second) = kernel(static_cast<Eigen::Index>(c), b);
    if (matches && !(table == report.expected_basis[static_cast<std::size_t>(b)])) matches = false;
    report.nullspace_basis.push_back(std::move(table));
  }
  report.matches_restriction = matches;
  return report;
}

}  // namespace gamow
