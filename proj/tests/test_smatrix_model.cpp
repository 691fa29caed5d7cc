#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gamow/smatrix_model.hpp"
#include "support.hpp"

using namespace gamow;
using gamow::test::cq;
using gamow::test::q;

namespace {

using C = std::complex<double>;
using P = Polynomial<C>;
using RF = RationalFunction<C>;
constexpr C kI(0.0, 1.0);

TestFunction<double> simple_pole_fn(C pole, int power, FunctionRole role, C scale = C(1.0)) {
  return TestFunction<double>::from_poles(P{scale}, std::vector<C>(static_cast<std::size_t>(power), pole), role);
}

TestFunction<double> constant_fn(C c, FunctionRole role) { return TestFunction<double>(RF(P{c}), role); }

}  // namespace

TEST_CASE("model evaluation") {
  const ComplexPole<double> p1(2.0, 0.5, 1);
  const auto unitary = SMatrixModel<double>::with_unitarity_default(p1);
  CHECK(std::abs(unitary(C(2.0)) - C(-2.0)) < 1e-15);
  CHECK_THROWS_AS(static_cast<void>(unitary(p1.position_value())), std::domain_error);

  const RF bg(P{C(1.0)}, P::from_roots({C(0.0, 2.0)}));
  const SMatrixModel<double> background_only(p1, {C(0.0)}, bg);
  CHECK_FALSE(background_only.has_pole());
  CHECK(std::abs(background_only(C(1.5)) - bg(C(1.5))) < 1e-15);

  const C a1(0.3, -0.2);
  const C a2(1.0, 0.5);
  const ComplexPole<double> p2(1.0, 1.0, 2);
  const SMatrixModel<double> m2(p2, {a1, a2});
  CHECK(std::abs(m2(p2.position_value() + 1.0) - (a1 + a2)) < 1e-14);
}

TEST_CASE("model ingestion invariants") {
  const ComplexPole<double> p2(1.0, 1.0, 2);
  CHECK_THROWS_AS(SMatrixModel<double>(p2, {C(1.0), C(0.0)}), std::invalid_argument);
  CHECK_THROWS_AS(SMatrixModel<double>(p2, {C(1.0)}), std::invalid_argument);
  CHECK_NOTHROW(SMatrixModel<double>(p2, {C(0.0), C(0.0)}));
  const RF lower(P{C(1.0)}, P::from_roots({C(0.0, -1.0)}));
  CHECK_THROWS_AS(SMatrixModel<double>(p2, {C(0.0), C(1.0)}, lower), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction<double>(lower, FunctionRole::Ket), std::invalid_argument);
  CHECK_THROWS_AS(simple_pole_fn(C(1.0, 0.0), 1, FunctionRole::Ket), std::invalid_argument);
}

TEST_CASE("residue expansion closed forms") {
  const ComplexPole<double> p1(2.0, 0.5, 1);
  const C zr = p1.position_value();
  const C a1(0.0, -0.5);
  const SMatrixModel<double> m1(p1, {a1});
  const auto f = simple_pole_fn(kI, 1, FunctionRole::Ket);
  const auto g = simple_pole_fn(C(1.0, 2.0), 1, FunctionRole::Bra);
  const C minus_two_pi_i(0.0, -2.0 * std::numbers::pi);
  CHECK(std::abs(residue_expansion(m1, f, g) - minus_two_pi_i * a1 * f(zr) * g(zr)) < 1e-14);

  // constant test functions: only a_{-1} survives
  for (int r = 1; r <= 4; ++r) {
    const ComplexPole<double> p(1.0, 1.0, r);
    std::vector<C> a;
    for (int n = 0; n < r; ++n) a.emplace_back(n + 1.0, -0.5 * n);
    const SMatrixModel<double> m(p, a);
    const C value = residue_expansion(m, constant_fn(1.0, FunctionRole::Ket), constant_fn(1.0, FunctionRole::Bra));
    CHECK(std::abs(value - minus_two_pi_i * a[0]) < 1e-13);
  }

  // r=2, f = 1/(z-i), g = 1
  const ComplexPole<double> p2(1.5, 0.8, 2);
  const C z2 = p2.position_value();
  const C b1(0.4, 0.1);
  const C b2(-0.2, 0.7);
  const SMatrixModel<double> m2(p2, {b1, b2});
  const C expected = minus_two_pi_i * (b1 / (z2 - kI) - b2 / ((z2 - kI) * (z2 - kI)));
  CHECK(std::abs(residue_expansion(m2, f, constant_fn(1.0, FunctionRole::Bra)) - expected) < 1e-13);

  CHECK_THROWS_AS(residue_sum(m2, g, f), std::invalid_argument);
}

TEST_CASE("exact Leibniz sum equals derivatives of the product") {
  // sum_n a_{-n-1}/n! (f g)^(n)(z_R), differentiating f*g as one function.
  using CR = ComplexRational;
  using PR = Polynomial<CR>;
  using RFR = RationalFunction<CR>;
  for (int r = 1; r <= 4; ++r) {
    const ComplexPole<Rational> pole(q(3, 2), q(1, 2), r);
    const CR zr = pole.position();
    std::vector<CR> a;
    for (int n = 0; n < r; ++n) a.push_back(cq(q(n + 1, 3), q(-n, 2)));
    const SMatrixModel<Rational> model(pole, a);
    const auto f = TestFunction<Rational>::from_poles(PR{cq(q(1), q(1)), cq(q(2))}, {cq(q(0), q(2)), cq(q(1), q(1))},
                                                      FunctionRole::Ket);
    const auto g = TestFunction<Rational>::from_poles(PR{cq(q(1, 2))}, {cq(q(-1), q(3))}, FunctionRole::Bra);
    RFR product = f.function() * g.function();
    CR expected(0);
    CR factorial(1);
    for (int n = 0; n < r; ++n) {
      if (n > 0) factorial *= CR(n);
      expected += a[static_cast<std::size_t>(n)] * product(zr) / factorial;
      product = product.derivative();
    }
    CHECK(residue_sum(model, f, g) == expected);
  }
}

TEST_CASE("dimensional bookkeeping of residue terms") {
  // a_{-n-1} f^(n-k) g^(k) is dimensionless for every n, k
  for (int n = 0; n < 6; ++n)
    for (int k = 0; k <= n; ++k) CHECK(residue_term_dimension(n, k).half_units() == 0);
}

TEST_CASE("zero model integrates to zero") {
  const ComplexPole<double> p(1.0, 1.0, 2);
  const SMatrixModel<double> zero(p, {C(0.0), C(0.0)});
  const auto f = simple_pole_fn(C(0.0, 2.0), 1, FunctionRole::Ket);
  const auto g = simple_pole_fn(C(0.0, 3.0), 1, FunctionRole::Bra);
  const auto direct = direct_contour_integral(zero, f, g);
  CHECK(direct.value == C(0.0));
  const auto report = decomposition_check(zero, f, g);
  CHECK(report.residue == C(0.0));
  CHECK(report.direct == report.background);
}

TEST_CASE("background-only model equals the integral of the background term") {
  const ComplexPole<double> p(1.0, 1.0, 1);
  const RF bg(P{C(2.0)}, P::from_roots({C(0.5, 1.5)}));
  const SMatrixModel<double> model(p, {C(0.0)}, bg);
  const auto f = simple_pole_fn(C(0.0, 2.0), 1, FunctionRole::Ket);
  const auto g = constant_fn(1.0, FunctionRole::Bra);
  const auto direct = direct_contour_integral(model, f, g);
  // int_0^inf 2 / ((E - 2i)(E - 0.5 - 1.5i)) dE by partial fractions:
  // 2/(b-a) [log(E-b) - log(E-a)]_0^inf = 2/(b-a) (log(-a) - log(-b))
  const C alpha(0.0, 2.0);
  const C beta(0.5, 1.5);
  const C exact = 2.0 / (beta - alpha) * (std::log(-alpha) - std::log(-beta));
  CHECK(direct.converged);
  CHECK(std::abs(direct.value - exact) < 1e-10 * std::abs(exact));
  const auto report = decomposition_check(model, f, g);
  CHECK(report.passed);
  CHECK(report.residue == C(0.0));
}

TEST_CASE("half-line integrals: convergence, truncation and falloff") {
  const ComplexPole<double> p(2.0, 0.4, 1);
  const SMatrixModel<double> model(p, {C(0.0, -0.4)});
  const auto f = simple_pole_fn(C(1.0, 1.0), 1, FunctionRole::Ket);
  const auto g = simple_pole_fn(C(3.0, 1.0), 1, FunctionRole::Bra);

  QuadratureConfig coarse;
  coarse.refinement_widths = 5.0;
  QuadratureConfig fine;
  fine.refinement_widths = 40.0;
  const auto a = direct_contour_integral(model, f, g, coarse);
  const auto b = direct_contour_integral(model, f, g, fine);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(std::abs(a.value - b.value) < 1e-9 * std::abs(b.value));

  QuadratureConfig truncated;
  truncated.e_max = 4.0;
  const auto t = direct_contour_integral(model, f, g, truncated);
  CHECK(t.converged);
  CHECK(std::abs(t.value - b.value) > 1e-6);

  // far from threshold, with f*g concentrated near the resonance, the
  // negative-axis leg is small next to the residue term
  const ComplexPole<double> far(200.0, 0.4, 1);
  const SMatrixModel<double> distant(far, {C(0.0, -0.4)});
  const auto near_f = simple_pole_fn(C(200.0, 1.0), 1, FunctionRole::Ket);
  const auto near_g = simple_pole_fn(C(199.0, 2.0), 1, FunctionRole::Bra);
  const auto background = background_integral(distant, near_f, near_g);
  CHECK(background.converged);
  CHECK(std::abs(background.value) < 1e-3 * std::abs(residue_expansion(distant, near_f, near_g)));

  const SMatrixModel<double> slow(p, {C(0.0, -0.4)}, RF(P{C(1.0)}));
  CHECK_THROWS_AS(direct_contour_integral(slow, constant_fn(1.0, FunctionRole::Ket), g), std::invalid_argument);
}

TEST_CASE("decomposition check over orders 1..4") {
  const auto f = simple_pole_fn(C(0.0, 2.0), 2, FunctionRole::Ket);
  const auto g = simple_pole_fn(C(0.0, 3.0), 1, FunctionRole::Bra);
  for (int r = 1; r <= 4; ++r) {
    const ComplexPole<double> p(1.5, 0.6, r);
    std::vector<C> a;
    for (int n = 0; n < r; ++n) a.emplace_back(0.5 - 0.1 * n, -0.3 + 0.2 * n);
    const SMatrixModel<double> model(p, a);
    const auto report = decomposition_check(model, f, g);
    CHECK(report.quadrature_converged);
    CHECK(report.discrepancy < 1e-8);
    CHECK(report.passed);
  }
}
