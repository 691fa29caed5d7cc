#pragma once

// Helpers and independent oracles shared by the test binaries.

#include <complex>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "gamow/exact.hpp"
#include "gamow/jordan_core.hpp"

namespace gamow::test {

inline Rational q(long a, long b = 1) { return {a, b}; }

inline ComplexRational cq(Rational re, Rational im = Rational(0)) { return {std::move(re), std::move(im)}; }

inline ComplexPole<Rational> rational_pole(int r, Rational energy = q(3, 2), Rational width = q(1, 3)) {
  return {std::move(energy), std::move(width), r};
}

// exp(-i N t) for the nilpotent part N of an r x r block with superdiagonal
// (1, 2, ..., r-1), summed term by term until N^p vanishes.
inline MatrixX<ComplexRational> nilpotent_series_exp(int r, const Rational& t) {
  MatrixX<ComplexRational> n = MatrixX<ComplexRational>::Zero(r, r);
  for (int k = 1; k < r; ++k) n(k - 1, k) = ComplexRational(k);
  const ComplexRational minus_it(Rational(0), -t);
  MatrixX<ComplexRational> term = MatrixX<ComplexRational>::Identity(r, r);
  MatrixX<ComplexRational> sum = term;
  for (int p = 1; p < r + 2; ++p) {
    term = term * n * minus_it / ComplexRational(p);
    if (is_exact_zero(term)) break;
    sum += term;
  }
  return sum;
}

// Dense floating-point exp(-iJt) via Eigen's Pade-based matrix exponential.
inline Eigen::MatrixXcd dense_propagator(int r, std::complex<double> z, double t) {
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(r, r);
  for (int k = 0; k < r; ++k) j(k, k) = z;
  for (int k = 1; k < r; ++k) j(k - 1, k) = static_cast<double>(k);
  const Eigen::MatrixXcd arg = std::complex<double>(0.0, -t) * j;
  return arg.exp();
}

inline Rational random_rational(std::mt19937& rng, int num_range, int den_max) {
  std::uniform_int_distribution<int> num(-num_range, num_range);
  std::uniform_int_distribution<int> den(1, den_max);
  return {num(rng), den(rng)};
}

inline Rational random_nonnegative_rational(std::mt19937& rng, int num_max, int den_max) {
  std::uniform_int_distribution<int> num(0, num_max);
  std::uniform_int_distribution<int> den(1, den_max);
  return {num(rng), den(rng)};
}

}  // namespace gamow::test
