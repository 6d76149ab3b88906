#pragma once

// Truncated q-expansions f(z) = sum c(n) q^n, q = e^{2 pi i z}, with exact rational
// coefficients. Exponents live on the (1/8)Z grid so theta_10 = 2 q^{1/8} + ... is
// representable; products of theta powers then land on coarser grids.

#include <gmpxx.h>

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace e8magic::qseries {

using Rational = mpq_class;

/// "num/den" with den always present; parse accepts "num" as well.
std::string to_string(const Rational& r);
Rational parse_rational(std::string_view text);

/// An exponent n = eighths/8.
class Exponent8 {
 public:
  constexpr Exponent8() = default;
  constexpr explicit Exponent8(std::int64_t eighths) : eighths_(eighths) {}

  static constexpr Exponent8 integer(std::int64_t n) { return Exponent8(8 * n); }
  static constexpr Exponent8 half(std::int64_t halves) { return Exponent8(4 * halves); }

  constexpr std::int64_t eighths() const { return eighths_; }
  constexpr double value() const { return static_cast<double>(eighths_) / 8.0; }
  Rational exact() const {
    Rational r(eighths_, 8);
    r.canonicalize();
    return r;
  }

  constexpr Exponent8 operator+(Exponent8 o) const { return Exponent8(eighths_ + o.eighths_); }
  constexpr Exponent8 operator-(Exponent8 o) const { return Exponent8(eighths_ - o.eighths_); }
  constexpr Exponent8 operator-() const { return Exponent8(-eighths_); }
  constexpr auto operator<=>(const Exponent8&) const = default;

 private:
  std::int64_t eighths_ = 0;
};

/// A series known exactly for exponents in [lead, order). Coefficients are stored
/// sparsely; zero coefficients are never stored.
class QSeries {
 public:
  using Terms = std::map<Exponent8, Rational>;

  QSeries() = default;
  /// The zero series valid on [lead, order). Throws InvalidInput if order < lead.
  QSeries(Exponent8 lead, Exponent8 order);
  /// Throws InvalidInput if a term lies outside [lead, order).
  QSeries(Exponent8 lead, Exponent8 order, const Terms& terms);

  Exponent8 lead() const { return lead_; }
  Exponent8 order() const { return order_; }
  const Terms& terms() const { return terms_; }

  /// Spacing of the populated grid: gcd of (e - first populated exponent); 0 when fewer
  /// than two terms are populated.
  Exponent8 stride() const;

  Rational coeff(Exponent8 e) const;
  /// Sets a coefficient inside [lead, order); setting 0 erases it.
  void set(Exponent8 e, const Rational& c);
  void add_to(Exponent8 e, const Rational& c);

  bool is_zero() const { return terms_.empty(); }
  /// First populated exponent; lead() when the series is zero.
  Exponent8 first_exponent() const;

  /// Same coefficients below new_order, order lowered to new_order (never raised).
  QSeries truncated(Exponent8 new_order) const;
  /// lead moved up to the first populated exponent.
  QSeries normalized() const;
  QSeries scaled(const Rational& s) const;

  /// Coefficientwise equality on the union of supports; lead/order are ignored.
  friend bool operator==(const QSeries& a, const QSeries& b) { return a.terms_ == b.terms_; }

 private:
  Exponent8 lead_{};
  Exponent8 order_{};
  Terms terms_;
};

enum class SeriesOp { add, sub, mul };

/// add/sub: lead = min of leads, order = min of orders.
/// mul: Cauchy product, order = min(lhs.order + rhs.lead, rhs.order + lhs.lead).
QSeries series_arith(const QSeries& lhs, const QSeries& rhs, SeriesOp kind);

QSeries operator+(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a, const QSeries& b);
QSeries operator*(const QSeries& a, const QSeries& b);
QSeries operator*(const Rational& s, const QSeries& f);
/// f + c (constant term)
QSeries operator+(const QSeries& f, const Rational& c);
QSeries operator-(const QSeries& f, const Rational& c);

/// num / den. Throws InvalidInput for a zero denominator and NumericalFailure when the
/// truncation orders leave no valid coefficient.
QSeries series_div(const QSeries& num, const QSeries& den);

/// D = q d/dq: c(n) -> n c(n).
QSeries series_D(const QSeries& f);

/// f(z + shift) for shift = +1 or -1. Requires support on the (1/2)Z grid.
QSeries series_translate(const QSeries& f, int shift);

/// power by repeated multiplication
QSeries series_pow(const QSeries& f, unsigned n);

struct EvalResult {
  std::complex<double> value;
  /// Upper bound for |sum_{n >= order} c(n) e^{2 pi i n z}| under the growth hypothesis.
  double tail_bound = 0.0;
};

/// Evaluates the stored terms at z and bounds the discarded tail assuming
/// |c(n)| <= bound_constant * e^{bound_exponent sqrt(n)} for every grid point n >= order.
/// The tail grid spacing is the series stride (1/8 when the stride is unknown) unless
/// tail_grid is given.
EvalResult series_eval_at(const QSeries& f, std::complex<double> z, double bound_constant,
                          double bound_exponent, Exponent8 tail_grid = Exponent8(0));

/// Double-precision copy of a series for fast repeated evaluation.
class NumericSeries {
 public:
  struct Term {
    double exponent;
    double coeff;
  };

  NumericSeries() = default;
  explicit NumericSeries(const QSeries& f);

  const std::vector<Term>& terms() const { return terms_; }
  double order() const { return order_; }

  std::complex<double> eval(std::complex<double> z) const;
  /// f(i y) for real y > 0; all terms are real there.
  double eval_imag_axis(double y) const;
  /// sum |c(n)| e^{-2 pi n y}, the scale against which rounding error is measured.
  double abs_sum_imag_axis(double y) const;

 private:
  std::vector<Term> terms_;
  double order_ = 0.0;
};

}  // namespace e8magic::qseries
