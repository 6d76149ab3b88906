#include "e8magic/rigor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "e8magic/error.hpp"

namespace e8magic::rigor {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double x) { return std::isinf(x) ? x : std::nextafter(x, -kInf); }
double up(double x) { return std::isinf(x) ? x : std::nextafter(x, kInf); }

Interval outward(double lo, double hi) { return Interval(down(lo), up(hi)); }

}  // namespace

Interval::Interval(double point) : lo_(point), hi_(point) {
  if (std::isnan(point)) throw InvalidInput("interval endpoint is NaN");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw InvalidInput("interval endpoint is NaN");
  if (lo > hi) {
    std::ostringstream msg;
    msg << "interval with lo > hi: [" << lo << ", " << hi << "]";
    throw InvalidInput(msg.str());
  }
}

Interval Interval::whole() { return {-kInf, kInf}; }

bool Interval::is_whole() const { return lo_ == -kInf && hi_ == kInf; }

double Interval::mid() const {
  if (is_whole()) return 0.0;
  return lo_ + 0.5 * (hi_ - lo_);
}

double Interval::mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

double Interval::mig() const {
  if (contains_zero()) return 0.0;
  return std::min(std::fabs(lo_), std::fabs(hi_));
}

Interval& Interval::operator+=(const Interval& y) { return *this = *this + y; }
Interval& Interval::operator-=(const Interval& y) { return *this = *this - y; }
Interval& Interval::operator*=(const Interval& y) { return *this = *this * y; }
Interval& Interval::operator/=(const Interval& y) { return *this = *this / y; }

Interval operator+(const Interval& x, const Interval& y) {
  return outward(x.lo() + y.lo(), x.hi() + y.hi());
}

Interval operator-(const Interval& x, const Interval& y) {
  return outward(x.lo() - y.hi(), x.hi() - y.lo());
}

Interval operator*(const Interval& x, const Interval& y) {
  const double a = x.lo() * y.lo();
  const double b = x.lo() * y.hi();
  const double c = x.hi() * y.lo();
  const double d = x.hi() * y.hi();
  return outward(std::min({a, b, c, d}), std::max({a, b, c, d}));
}

Interval operator/(const Interval& x, const Interval& y) {
  if (y.contains_zero()) throw InvalidInput("interval division by an interval containing 0");
  const double a = x.lo() / y.lo();
  const double b = x.lo() / y.hi();
  const double c = x.hi() / y.lo();
  const double d = x.hi() / y.hi();
  return outward(std::min({a, b, c, d}), std::max({a, b, c, d}));
}

Interval hull(const Interval& x, const Interval& y) {
  return {std::min(x.lo(), y.lo()), std::max(x.hi(), y.hi())};
}

Interval exp(const Interval& x) {
  // glibc exp is accurate to < 1 ulp; two steps outward covers it.
  double lo = down(down(std::exp(x.lo())));
  double hi = up(up(std::exp(x.hi())));
  lo = std::max(lo, 0.0);
  if (!std::isfinite(hi)) throw NumericalFailure("interval exp overflow");
  return {lo, hi};
}

Interval sqrt(const Interval& x) {
  if (x.lo() < 0.0) throw InvalidInput("interval sqrt of negative values");
  return {std::max(0.0, down(std::sqrt(x.lo()))), up(std::sqrt(x.hi()))};
}

Interval pow(const Interval& x, unsigned n) {
  if (n == 0) return Interval(1.0);
  if (x.lo() >= 0.0) {
    Interval lo(x.lo());
    Interval hi(x.hi());
    Interval plo(1.0), phi(1.0);
    for (unsigned i = 0; i < n; ++i) {
      plo = plo * lo;
      phi = phi * hi;
    }
    return {std::max(0.0, plo.lo()), phi.hi()};
  }
  if (x.hi() <= 0.0) {
    const Interval r = pow(-x, n);
    return (n % 2 == 0) ? r : -r;
  }
  // straddles zero
  const Interval neg = pow(Interval(0.0, -x.lo()), n);
  const Interval pos = pow(Interval(0.0, x.hi()), n);
  if (n % 2 == 0) return {0.0, std::max(neg.hi(), pos.hi())};
  return {-neg.hi(), pos.hi()};
}

Interval abs(const Interval& x) {
  if (x.lo() >= 0.0) return x;
  if (x.hi() <= 0.0) return -x;
  return {0.0, x.mag()};
}

Interval around(double x) { return outward(x, x); }

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  return os << '[' << x.lo() << ", " << x.hi() << ']';
}

Interval ia_arith(const Interval& x, const Interval& y, ArithKind kind) {
  switch (kind) {
    case ArithKind::add: return x + y;
    case ArithKind::sub: return x - y;
    case ArithKind::mul: return x * y;
    case ArithKind::div: return x / y;
  }
  throw InvalidInput("unknown interval operation");
}

namespace {

// tau^p e^{-sigma tau} at a single tau with a single sigma
Interval exp_poly_at(unsigned p, double sigma, double tau) {
  return pow(Interval(tau), p) * exp(-(Interval(sigma) * Interval(tau)));
}

}  // namespace

Interval ia_exp_poly(const Interval& c, unsigned p, const Interval& sigma, const Interval& t) {
  if (t.lo() < 0.0) throw InvalidInput("ia_exp_poly requires t >= 0");
  const double pd = static_cast<double>(p);
  Interval shape;
  if (sigma.lo() >= 0.0 && sigma.lo() * t.lo() >= pd) {
    // decreasing in tau and in sigma
    shape = Interval(exp_poly_at(p, sigma.hi(), t.hi()).lo(), exp_poly_at(p, sigma.lo(), t.lo()).hi());
  } else if (sigma.hi() <= 0.0 || (sigma.lo() >= 0.0 && sigma.hi() * t.hi() <= pd)) {
    // increasing in tau, decreasing in sigma
    shape = Interval(exp_poly_at(p, sigma.hi(), t.lo()).lo(), exp_poly_at(p, sigma.lo(), t.hi()).hi());
  } else {
    shape = pow(t, p) * exp(-(sigma * t));
  }
  return c * shape;
}

namespace constants {

Interval pi() { return {0x1.921fb54442d18p+1, 0x1.921fb54442d19p+1}; }
Interval pi2() { return {0x1.3bd3cc9be45dep+3, 0x1.3bd3cc9be45dfp+3}; }
Interval inv_pi() { return {0x1.45f306dc9c882p-2, 0x1.45f306dc9c883p-2}; }
Interval inv_pi2() { return {0x1.9f02f6222c71fp-4, 0x1.9f02f6222c720p-4}; }

}  // namespace constants

}  // namespace e8magic::rigor
