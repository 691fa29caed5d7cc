#pragma once

#include <stdexcept>
#include <type_traits>

#include "gamow/exact.hpp"

namespace gamow {

/// C(n, k) as an exact integer; zero outside 0 <= k <= n.
inline BigInt binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

inline BigInt factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of negative integer");
  BigInt result = 1;
  for (int i = 2; i <= n; ++i) result *= i;
  return result;
}

/// C(n, k) converted into an arbitrary scalar type (exact for Q and Q(i)).
template <typename Scalar>
Scalar binomial_as(int n, int k) {
  if constexpr (std::is_same_v<Scalar, Rational> || std::is_same_v<Scalar, ComplexRational>) {
    return Scalar(Rational(binomial(n, k), BigInt(1)));
  } else {
    return Scalar(binomial(n, k).template convert_to<double>());
  }
}

template <typename Scalar>
Scalar factorial_as(int n) {
  if constexpr (std::is_same_v<Scalar, Rational> || std::is_same_v<Scalar, ComplexRational>) {
    return Scalar(Rational(factorial(n), BigInt(1)));
  } else {
    return Scalar(factorial(n).template convert_to<double>());
  }
}

/// C(n,k)C(k,l)C(n-k,m) == C(n,m)C(n-m,l)C(n-m-l,k-l), the identity that
/// regroups the triple binomial product inside the operator-evolution sum.
inline bool binomial_product_identity_holds(int n, int k, int l, int m) {
  const BigInt lhs = binomial(n, k) * binomial(k, l) * binomial(n - k, m);
  const BigInt rhs = binomial(n, m) * binomial(n - m, l) * binomial(n - m - l, k - l);
  return lhs == rhs;
}

/// Sum_{s=0}^{d} C(d, s) (-1)^s, which is (1-1)^d.
inline BigInt alternating_binomial_sum(int d) {
  BigInt total = 0;
  for (int s = 0; s <= d; ++s) total += (s % 2 == 0 ? 1 : -1) * binomial(d, s);
  return total;
}

}  // namespace gamow
