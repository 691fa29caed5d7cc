#pragma once

// Exact scalar types used by the symbolic paths of the library.
//
// Rational wraps boost::multiprecision's arbitrary precision rational and
// ComplexRational is the field Q(i). Both carry Eigen::NumTraits so that
// Eigen::Matrix<Rational, ...> and Eigen::Matrix<ComplexRational, ...> can
// be used with ordinary Eigen expressions (products, blocks, transposes).

#include <cmath>
#include <compare>
#include <complex>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace gamow {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
 public:
  using Storage = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                                boost::multiprecision::et_off>;

  Rational() = default;

  template <std::integral I>
  Rational(I value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  Rational(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) throw std::domain_error("Rational: zero denominator");
    value_ = Storage(numerator, denominator);
  }

  template <std::integral I, std::integral J>
  Rational(I numerator, J denominator) : Rational(BigInt(numerator), BigInt(denominator)) {}

  explicit Rational(const Storage& value) : value_(value) {}

  /// Exact binary value of a finite double.
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("Rational::from_double: non-finite input");
    return Rational(Storage(x));
  }

  [[nodiscard]] double to_double() const { return value_.convert_to<double>(); }
  [[nodiscard]] bool is_zero() const { return value_.is_zero(); }
  [[nodiscard]] int sign() const { return value_.sign(); }
  [[nodiscard]] BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  [[nodiscard]] BigInt denominator() const { return boost::multiprecision::denominator(value_); }
  [[nodiscard]] std::string str() const { return value_.str(); }
  [[nodiscard]] const Storage& storage() const { return value_; }

  Rational operator-() const { return Rational(Storage(-value_)); }

  Rational& operator+=(const Rational& rhs) {
    value_ += rhs.value_;
    return *this;
  }
  Rational& operator-=(const Rational& rhs) {
    value_ -= rhs.value_;
    return *this;
  }
  Rational& operator*=(const Rational& rhs) {
    value_ *= rhs.value_;
    return *this;
  }
  Rational& operator/=(const Rational& rhs) {
    if (rhs.is_zero()) throw std::domain_error("Rational: division by zero");
    value_ /= rhs.value_;
    return *this;
  }

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = a.value_.compare(b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.value_; }

 private:
  Storage value_;
};

inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

/// Gaussian rationals: re + i*im with re, im in Q.
class ComplexRational {
 public:
  ComplexRational() = default;

  template <std::integral I>
  ComplexRational(I value) : re_(value) {}  // NOLINT(google-explicit-constructor)

  ComplexRational(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
  ComplexRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static ComplexRational i() { return {Rational(0), Rational(1)}; }

  [[nodiscard]] const Rational& real() const { return re_; }
  [[nodiscard]] const Rational& imag() const { return im_; }
  [[nodiscard]] bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  [[nodiscard]] Rational norm() const { return re_ * re_ + im_ * im_; }
  [[nodiscard]] ComplexRational conj() const { return {re_, -im_}; }
  [[nodiscard]] std::complex<double> to_std() const { return {re_.to_double(), im_.to_double()}; }

  ComplexRational operator-() const { return {-re_, -im_}; }

  ComplexRational& operator+=(const ComplexRational& rhs) {
    re_ += rhs.re_;
    im_ += rhs.im_;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& rhs) {
    re_ -= rhs.re_;
    im_ -= rhs.im_;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& rhs) {
    Rational re = re_ * rhs.re_ - im_ * rhs.im_;
    im_ = re_ * rhs.im_ + im_ * rhs.re_;
    re_ = std::move(re);
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& rhs) {
    const Rational d = rhs.norm();
    if (d.is_zero()) throw std::domain_error("ComplexRational: division by zero");
    *this *= rhs.conj();
    re_ /= d;
    im_ /= d;
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ComplexRational& z) {
    os << z.re_;
    if (!z.im_.is_zero()) {
      if (z.im_.sign() > 0) os << '+';
      os << z.im_ << 'i';
    }
    return os;
  }

 private:
  Rational re_;
  Rational im_;
};

inline ComplexRational conj(const ComplexRational& z) { return z.conj(); }

// ---------------------------------------------------------------------------
// Real <-> complex scalar pairing. Every templated component is written in
// terms of a real type (double or Rational) and its complex partner.

template <typename Real>
struct ComplexOf;

template <>
struct ComplexOf<double> {
  using type = std::complex<double>;
};

template <>
struct ComplexOf<Rational> {
  using type = ComplexRational;
};

template <typename Real>
using Complex = typename ComplexOf<Real>::type;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Real>
concept RealScalar = std::same_as<Real, double> || std::same_as<Real, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.to_double(); }

inline std::complex<double> to_std_complex(const std::complex<double>& z) { return z; }
inline std::complex<double> to_std_complex(const ComplexRational& z) { return z.to_std(); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const std::complex<double>& z) { return z == 0.0; }
inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const ComplexRational& z) { return z.is_zero(); }

template <RealScalar Real>
Complex<Real> make_complex(const Real& re, const Real& im) {
  return Complex<Real>(re, im);
}

template <typename Scalar>
Scalar imaginary_unit() {
  if constexpr (std::same_as<Scalar, ComplexRational>) {
    return ComplexRational::i();
  } else {
    return Scalar(0.0, 1.0);
  }
}

template <typename Scalar>
Scalar int_power(Scalar base, unsigned exponent) {
  Scalar result(1);
  while (exponent != 0) {
    if (exponent & 1U) result *= base;
    base *= base;
    exponent >>= 1U;
  }
  return result;
}

template <typename Derived>
bool is_exact_zero(const Eigen::DenseBase<Derived>& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (!is_zero(m.derived().coeff(r, c))) return false;
  return true;
}

template <typename Scalar>
MatrixX<std::complex<double>> to_std_matrix(const MatrixX<Scalar>& m) {
  return m.unaryExpr([](const Scalar& z) { return to_std_complex(z); });
}

}  // namespace gamow

namespace Eigen {

template <>
struct NumTraits<gamow::Rational> : GenericNumTraits<gamow::Rational> {
  using Real = gamow::Rational;
  using NonInteger = gamow::Rational;
  using Nested = gamow::Rational;
  using Literal = gamow::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 50,
    MulCost = 50
  };
  static inline int digits10() { return 0; }
  static inline gamow::Rational epsilon() { return {}; }
  static inline gamow::Rational dummy_precision() { return {}; }
};

template <>
struct NumTraits<gamow::ComplexRational> : GenericNumTraits<gamow::ComplexRational> {
  using Real = gamow::ComplexRational;
  using NonInteger = gamow::ComplexRational;
  using Nested = gamow::ComplexRational;
  using Literal = gamow::ComplexRational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 20,
    AddCost = 100,
    MulCost = 200
  };
  static inline int digits10() { return 0; }
  static inline gamow::ComplexRational epsilon() { return {}; }
  static inline gamow::ComplexRational dummy_precision() { return {}; }
};

}  // namespace Eigen
