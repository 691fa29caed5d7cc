#include "gamow/smatrix_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gamow {
namespace {

using cplx = std::complex<double>;
using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Integrand {
  const SMatrixModel<double>& model;
  const TestFunction<double>& ket;
  const TestFunction<double>& bra;

  cplx operator()(double e) const {
    const cplx z(e, 0.0);
    return ket(z) * model(z) * bra(z);
  }

  // Every singularity of f S g, for breakpoint placement.
  [[nodiscard]] std::vector<cplx> singularities() const {
    std::vector<cplx> out;
    if (model.has_pole()) out.push_back(model.pole().position_value());
    for (const auto& p : model.background_poles()) out.push_back(p);
    for (const auto& p : ket.poles()) out.push_back(p);
    for (const auto& p : bra.poles()) out.push_back(p);
    return out;
  }
};

void require_decay(const Integrand& f) {
  const long decay = static_cast<long>(f.ket.decay_order()) + f.bra.decay_order() + f.model.decay_order();
  if (decay < 2)
    throw std::invalid_argument("integrand must decay at least like 1/|E|^2 along the real axis");
}

// Breakpoints around each singularity p: Re p + s * w * {0, 0.5, 1.5, 5, widths},
// with w = 2 |Im p| (the width of the Lorentzian it produces on the axis).
std::vector<double> breakpoints(const Integrand& f, double widths) {
  std::vector<double> out;
  const double offsets[] = {0.0, 0.5, 1.5, 5.0};
  for (const cplx& p : f.singularities()) {
    const double w = 2.0 * std::abs(p.imag());
    for (double s : {-1.0, 1.0}) {
      for (double o : offsets) out.push_back(p.real() + s * o * w);
      out.push_back(p.real() + s * widths * w);
    }
  }
  return out;
}

// int_lo^hi over [lo, hi) with hi possibly +infinity, lo >= 0 finite.
QuadratureResult integrate_half_line(const std::function<cplx(double)>& g, std::vector<double> cuts, double hi,
                                     const QuadratureConfig& config) {
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> nodes;
  // Cuts closer than a few ulps would give zero-width pieces that never converge.
  auto distinct = [](double a, double b) { return b - a > 1e-9 * std::max(1.0, std::abs(b)); };
  for (double c : cuts)
    if (c >= 0.0 && c < hi && (nodes.empty() || distinct(nodes.back(), c))) nodes.push_back(c);
  if (std::isfinite(hi)) {
    if (nodes.size() > 1 && !distinct(nodes.back(), hi)) nodes.pop_back();
    nodes.push_back(hi);
  }

  QuadratureResult out;
  out.value = 0.0;
  auto add_piece = [&](double a, double b) {
    double err = 0.0;
    double l1 = 0.0;
    out.value += Kronrod::integrate(g, a, b, config.max_depth, config.rel_tol, &err, &l1);
    out.error_estimate += err;
    out.l1_norm += l1;
  };
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) add_piece(nodes[i], nodes[i + 1]);
  if (!std::isfinite(hi)) add_piece(nodes.back(), std::numeric_limits<double>::infinity());

  out.converged = std::isfinite(out.value.real()) && std::isfinite(out.value.imag()) &&
                  out.error_estimate <= std::max(config.abs_tol, config.rel_tol * out.l1_norm);
  return out;
}

}  // namespace

QuadratureResult direct_contour_integral(const SMatrixModel<double>& model, const TestFunction<double>& ket,
                                         const TestFunction<double>& bra, const QuadratureConfig& config) {
  const Integrand f{model, ket, bra};
  if (!(config.e_max > 0.0)) throw std::invalid_argument("direct_contour_integral: e_max must be positive");
  if (!std::isfinite(config.e_max)) require_decay(f);
  return integrate_half_line([&](double e) { return f(e); }, breakpoints(f, config.refinement_widths), config.e_max,
                             config);
}

QuadratureResult background_integral(const SMatrixModel<double>& model, const TestFunction<double>& ket,
                                     const TestFunction<double>& bra, const QuadratureConfig& config) {
  const Integrand f{model, ket, bra};
  require_decay(f);
  // int_0^{-inf} F(E) dE = -int_0^{inf} F(-x) dx
  std::vector<double> cuts = breakpoints(f, config.refinement_widths);
  for (double& c : cuts) c = -c;
  QuadratureResult out = integrate_half_line([&](double x) { return f(-x); }, std::move(cuts),
                                             std::numeric_limits<double>::infinity(), config);
  out.value = -out.value;
  return out;
}

DecompositionReport decomposition_check(const SMatrixModel<double>& model, const TestFunction<double>& ket,
                                        const TestFunction<double>& bra, const QuadratureConfig& config,
                                        double tolerance) {
  QuadratureConfig full = config;
  full.e_max = std::numeric_limits<double>::infinity();

  const QuadratureResult direct = direct_contour_integral(model, ket, bra, full);
  const QuadratureResult background = background_integral(model, ket, bra, full);

  DecompositionReport report;
  report.direct = direct.value;
  report.background = background.value;
  report.residue = model.has_pole() ? residue_expansion(model, ket, bra) : cplx(0.0, 0.0);
  report.direct_error = direct.error_estimate;
  report.background_error = background.error_estimate;
  const double gap = std::abs(report.direct - (report.background + report.residue));
  const double scale = std::abs(report.direct);
  report.discrepancy = scale > 0.0 ? gap / scale : gap;
  report.tolerance = tolerance;
  report.quadrature_converged = direct.converged && background.converged;
  report.passed = report.quadrature_converged && report.discrepancy < tolerance;
  return report;
}

}  // namespace gamow
