#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gamow/decay_operators.hpp"
#include "gamow/smatrix_model.hpp"

namespace gamow {

/// Malformed or inconsistent user input (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);

nlohmann::json complex_to_json(std::complex<double> z);

/// Accepts [re, im] or a bare number; `field` names the location in errors.
std::complex<double> complex_from_json(const nlohmann::json& value, const std::string& field);

/// {"j", "equations": [{"l","m","n","terms":[{"n","k","coeff":[re,im]}]}], "solution_dimension"}
nlohmann::json constraint_system_to_json(const ConstraintSystem& system, int solution_dimension);

nlohmann::json rational_matrix_to_json(const MatrixX<Rational>& m);

template <RealScalar Real>
nlohmann::json dyadic_operator_to_json(const DyadicOperator<Real>& op) {
  nlohmann::json terms = nlohmann::json::array();
  for (int k = 0; k < op.order(); ++k)
    for (int m = 0; m < op.order(); ++m)
      if (!gamow::is_zero(op.ket_bra()(k, m)))
        terms.push_back({{"ket", k}, {"bra", m}, {"coeff", complex_to_json(to_std_complex(op.ket_bra()(k, m)))}});
  return {{"order", op.order()}, {"terms", terms}};
}

/// A model file: pole, Laurent coefficients, optional background, and the
/// ket/bra test functions to pair up.
struct ModelDocument {
  SMatrixModel<double> model;
  std::vector<TestFunction<double>> kets;
  std::vector<TestFunction<double>> bras;
  QuadratureConfig quadrature;
  std::optional<double> tolerance;
};

/// Parses model JSON text; errors carry line/column or the offending field.
ModelDocument parse_model_document(const std::string& text);
ModelDocument load_model_document(const std::string& path);

nlohmann::json decomposition_report_to_json(const DecompositionReport& report);

/// Reads a whole file; throws InputError if it cannot be opened.
std::string read_text_file(const std::string& path);

/// Parses JSON text, mapping parse failures to InputError with line/column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

}  // namespace gamow
