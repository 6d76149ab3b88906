#pragma once

// Interval arithmetic with outward rounding.
//
// Every operation computes its endpoints in round-to-nearest and then moves each
// endpoint one representable value outward (two for exp), so the result always
// contains the exact real result for all operands inside the input intervals.
// Nothing here touches the hardware rounding mode.

#include <iosfwd>

namespace e8magic::rigor {

class Interval {
 public:
  constexpr Interval() = default;
  explicit Interval(double point);
  /// Throws InvalidInput if lo > hi or either endpoint is NaN.
  Interval(double lo, double hi);

  /// The whole real line; the only interval allowed to have infinite endpoints.
  static Interval whole();

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mid() const;
  double width() const { return hi_ - lo_; }
  /// max(|lo|, |hi|)
  double mag() const;
  /// min |x| over the interval (0 if it straddles zero)
  double mig() const;

  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool is_whole() const;
  bool strictly_negative() const { return hi_ < 0.0; }
  bool strictly_positive() const { return lo_ > 0.0; }

  Interval operator-() const { return {-hi_, -lo_}; }
  Interval& operator+=(const Interval& y);
  Interval& operator-=(const Interval& y);
  Interval& operator*=(const Interval& y);
  Interval& operator/=(const Interval& y);

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

Interval operator+(const Interval& x, const Interval& y);
Interval operator-(const Interval& x, const Interval& y);
Interval operator*(const Interval& x, const Interval& y);
/// Throws InvalidInput when 0 lies in y.
Interval operator/(const Interval& x, const Interval& y);

Interval hull(const Interval& x, const Interval& y);
Interval exp(const Interval& x);
/// Requires x.lo() >= 0.
Interval sqrt(const Interval& x);
Interval pow(const Interval& x, unsigned n);
Interval abs(const Interval& x);

/// Tightest double interval known to contain x's exact value when x came from a
/// computation with at most one rounding (e.g. a mpq -> double conversion).
Interval around(double x);

std::ostream& operator<<(std::ostream& os, const Interval& x);

enum class ArithKind { add, sub, mul, div };

Interval ia_arith(const Interval& x, const Interval& y, ArithKind kind);

/// Enclosure of { c * tau^p * exp(-sigma * tau) : c in c, sigma in sigma, tau in t }.
/// Uses monotonicity of tau^p e^{-sigma tau} whenever sigma is sign-definite and the
/// critical point p/sigma lies outside t; otherwise falls back to the product of
/// the factor ranges. Requires t.lo() >= 0.
Interval ia_exp_poly(const Interval& c, unsigned p, const Interval& sigma, const Interval& t);

namespace constants {
Interval pi();
Interval pi2();
Interval inv_pi();
Interval inv_pi2();
}  // namespace constants

}  // namespace e8magic::rigor
