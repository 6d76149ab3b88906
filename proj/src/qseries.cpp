#include "e8magic/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "e8magic/error.hpp"
#include "e8magic/rigor.hpp"

namespace e8magic::qseries {

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw InvalidInput("empty rational literal");
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(mpz_class(s, 10));
    const mpz_class num(s.substr(0, slash), 10);
    const mpz_class den(s.substr(slash + 1), 10);
    if (den == 0) throw InvalidInput("rational literal with zero denominator: " + s);
    Rational r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw InvalidInput("malformed rational literal: " + s);
  }
}

QSeries::QSeries(Exponent8 lead, Exponent8 order) : lead_(lead), order_(order) {
  if (order < lead) throw InvalidInput("series order below its lead exponent");
}

QSeries::QSeries(Exponent8 lead, Exponent8 order, const Terms& terms) : QSeries(lead, order) {
  for (const auto& [e, c] : terms) set(e, c);
}

Exponent8 QSeries::stride() const {
  if (terms_.size() < 2) return Exponent8(0);
  const std::int64_t first = terms_.begin()->first.eighths();
  std::int64_t g = 0;
  for (const auto& [e, c] : terms_) g = std::gcd(g, e.eighths() - first);
  return Exponent8(g);
}

Rational QSeries::coeff(Exponent8 e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void QSeries::set(Exponent8 e, const Rational& c) {
  if (e < lead_ || e >= order_) {
    std::ostringstream msg;
    msg << "exponent " << e.value() << " outside series range [" << lead_.value() << ", "
        << order_.value() << ")";
    throw InvalidInput(msg.str());
  }
  if (c == 0) {
    terms_.erase(e);
  } else {
    terms_[e] = c;
  }
}

void QSeries::add_to(Exponent8 e, const Rational& c) { set(e, coeff(e) + c); }

Exponent8 QSeries::first_exponent() const {
  return terms_.empty() ? lead_ : terms_.begin()->first;
}

QSeries QSeries::truncated(Exponent8 new_order) const {
  QSeries out(lead_, std::max(lead_, std::min(order_, new_order)));
  for (const auto& [e, c] : terms_) {
    if (e >= out.order_) break;
    out.terms_.emplace(e, c);
  }
  return out;
}

QSeries QSeries::normalized() const {
  QSeries out = *this;
  out.lead_ = first_exponent();
  return out;
}

QSeries QSeries::scaled(const Rational& s) const {
  QSeries out(lead_, order_);
  if (s == 0) return out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * s);
  return out;
}

QSeries series_arith(const QSeries& lhs, const QSeries& rhs, SeriesOp kind) {
  if (kind == SeriesOp::mul) {
    const Exponent8 lead = lhs.lead() + rhs.lead();
    const Exponent8 order = std::min(lhs.order() + rhs.lead(), rhs.order() + lhs.lead());
    QSeries out(lead, std::max(lead, order));
    std::map<Exponent8, Rational> acc;
    for (const auto& [ea, ca] : lhs.terms()) {
      for (const auto& [eb, cb] : rhs.terms()) {
        const Exponent8 e = ea + eb;
        if (e >= out.order()) break;
        acc[e] += ca * cb;
      }
    }
    for (auto& [e, c] : acc) out.set(e, c);
    return out;
  }
  const Exponent8 lead = std::min(lhs.lead(), rhs.lead());
  const Exponent8 order = std::min(lhs.order(), rhs.order());
  QSeries out(lead, std::max(lead, order));
  auto acc = lhs.truncated(order).terms();
  for (const auto& [e, c] : rhs.terms()) {
    if (e >= order) break;
    if (kind == SeriesOp::add) {
      acc[e] += c;
    } else {
      acc[e] -= c;
    }
  }
  for (auto& [e, c] : acc) out.set(e, c);
  return out;
}

QSeries operator+(const QSeries& a, const QSeries& b) { return series_arith(a, b, SeriesOp::add); }
QSeries operator-(const QSeries& a, const QSeries& b) { return series_arith(a, b, SeriesOp::sub); }
QSeries operator*(const QSeries& a, const QSeries& b) { return series_arith(a, b, SeriesOp::mul); }
QSeries operator*(const Rational& s, const QSeries& f) { return f.scaled(s); }

QSeries operator+(const QSeries& f, const Rational& c) {
  const Exponent8 lead = std::min(f.lead(), Exponent8(0));
  QSeries out(lead, std::max(lead, f.order()), f.terms());
  if (Exponent8(0) < out.order()) out.add_to(Exponent8(0), c);
  return out;
}

QSeries operator-(const QSeries& f, const Rational& c) { return f + Rational(-c); }

QSeries series_div(const QSeries& num, const QSeries& den) {
  if (den.is_zero()) throw InvalidInput("series division by the zero series");
  const QSeries d = den.normalized();
  const QSeries n = num.is_zero() ? num : num.normalized();
  const Exponent8 lead = n.lead() - d.lead();
  const Exponent8 span = std::min(n.order() - n.lead(), d.order() - d.lead());
  if (span <= Exponent8(0)) {
    std::ostringstream msg;
    msg << "series_div: no valid coefficients; numerator needs order above " << n.lead().value()
        << " and denominator above " << d.lead().value();
    throw NumericalFailure(msg.str());
  }
  const Exponent8 order = lead + span;
  QSeries out(lead, order);
  if (n.is_zero()) return out;

  std::int64_t grid = std::gcd(n.stride().eighths(), d.stride().eighths());
  if (grid == 0) grid = 8;
  const Rational inv_lead = 1 / d.coeff(d.lead());
  for (Exponent8 e = lead; e < order; e = e + Exponent8(grid)) {
    // num(e + dlead) = sum_k den(dlead + k) out(e - k)
    Rational acc = n.coeff(e + d.lead());
    for (const auto& [de, dc] : d.terms()) {
      if (de == d.lead()) continue;
      const Exponent8 k = de - d.lead();
      const Exponent8 prev = e - k;
      if (prev < lead) break;
      const auto it = out.terms().find(prev);
      if (it != out.terms().end()) acc -= dc * it->second;
    }
    if (acc != 0) out.set(e, acc * inv_lead);
  }
  return out;
}

QSeries series_D(const QSeries& f) {
  QSeries out(f.lead(), f.order());
  for (const auto& [e, c] : f.terms()) out.set(e, c * e.exact());
  return out;
}

QSeries series_translate(const QSeries& f, int shift) {
  if (shift != 1 && shift != -1) throw InvalidInput("series_translate supports shifts of +1 and -1");
  QSeries out(f.lead(), f.order());
  for (const auto& [e, c] : f.terms()) {
    if (e.eighths() % 4 != 0) {
      throw InvalidInput("series_translate: support finer than the (1/2)Z grid");
    }
    // e^{2 pi i n shift} = (-1)^{2n} for n in (1/2)Z
    const bool half = (e.eighths() % 8) != 0;
    out.set(e, half ? Rational(-c) : c);
  }
  return out;
}

QSeries series_pow(const QSeries& f, unsigned n) {
  if (n == 0) {
    QSeries one(Exponent8(0), f.order() - f.lead());
    one.set(Exponent8(0), 1);
    return one;
  }
  QSeries out = f;
  for (unsigned i = 1; i < n; ++i) out = out * f;
  return out;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::int64_t kMaxIndividualTailTerms = 1'000'000;

}  // namespace

EvalResult series_eval_at(const QSeries& f, std::complex<double> z, double bound_constant,
                          double bound_exponent, Exponent8 tail_grid) {
  using rigor::Interval;
  const double y = z.imag();
  if (!(y > 0.0)) throw InvalidInput("series_eval_at requires Im z > 0");
  if (bound_constant < 0.0 || bound_exponent < 0.0) {
    throw InvalidInput("coefficient growth bound must be nonnegative");
  }

  EvalResult out;
  for (const auto& [e, c] : f.terms()) {
    const double n = e.value();
    out.value += c.get_d() * std::exp(std::complex<double>(0.0, kTwoPi * n) * z);
  }

  std::int64_t step = tail_grid.eighths();
  if (step <= 0) step = f.stride().eighths();
  if (step <= 0) step = 1;
  const std::int64_t order = f.order().eighths();
  if (order <= 0) throw InvalidInput("series_eval_at: tail bound needs a positive truncation order");
  if (bound_constant == 0.0) return out;

  // Beyond n* = (beta/(pi y))^2 + order each term is at most C e^{-pi n y}.
  const double ratio = bound_exponent / (std::numbers::pi * y);
  const double nstar = std::ceil(ratio * ratio) + f.order().value();
  const std::int64_t nstar8 = static_cast<std::int64_t>(nstar * 8.0);
  if ((nstar8 - order) / step > kMaxIndividualTailTerms) {
    std::ostringstream msg;
    msg << "series_eval_at: tail majorant needs " << (nstar8 - order) / step
        << " individually bounded terms at Im z = " << y << "; use Im z >= "
        << bound_exponent / (std::numbers::pi * std::sqrt(kMaxIndividualTailTerms / 8.0));
    throw NumericalFailure(msg.str());
  }

  const Interval C = rigor::around(bound_constant);
  const Interval beta = rigor::around(bound_exponent);
  const Interval two_pi_y = Interval(2.0) * rigor::constants::pi() * rigor::around(y);
  Interval tail(0.0);
  std::int64_t e = order;
  for (; e < nstar8; e += step) {
    const Interval n = Interval(static_cast<double>(e)) / Interval(8.0);
    tail += C * rigor::exp(beta * rigor::sqrt(n) - two_pi_y * n);
  }
  // geometric remainder from the first grid point at or beyond n*
  const Interval n0 = Interval(static_cast<double>(e)) / Interval(8.0);
  const Interval pi_y = rigor::constants::pi() * rigor::around(y);
  const Interval s = Interval(static_cast<double>(step)) / Interval(8.0);
  const Interval q = rigor::exp(-(pi_y * s));
  tail += C * rigor::exp(-(pi_y * n0)) / (Interval(1.0) - q);
  out.tail_bound = tail.hi();
  return out;
}

NumericSeries::NumericSeries(const QSeries& f) : order_(f.order().value()) {
  terms_.reserve(f.terms().size());
  for (const auto& [e, c] : f.terms()) terms_.push_back({e.value(), c.get_d()});
}

std::complex<double> NumericSeries::eval(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (const auto& t : terms_) acc += t.coeff * std::exp(std::complex<double>(0.0, kTwoPi * t.exponent) * z);
  return acc;
}

double NumericSeries::eval_imag_axis(double y) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.coeff * std::exp(-kTwoPi * t.exponent * y);
  return acc;
}

double NumericSeries::abs_sum_imag_axis(double y) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += std::fabs(t.coeff) * std::exp(-kTwoPi * t.exponent * y);
  return acc;
}

}  // namespace e8magic::qseries
