#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "e8magic/certify.hpp"
#include "e8magic/error.hpp"
#include "e8magic/modforms.hpp"

using namespace e8magic::certify;
using e8magic::modforms::FormId;
using e8magic::qseries::Rational;
using e8magic::rigor::Interval;

TEST_CASE("one-term models near zero") {
  auto a = build_model(Target::A, 2, Regime::near_zero);
  REQUIRE(a.terms.size() == 1);
  CHECK(a.terms[0].coeff == -368640);
  CHECK(a.terms[0].pi_power == -2);
  CHECK(a.terms[0].p == 0);
  CHECK(a.terms[0].sigma_over_pi == 1);
  auto b = build_model(Target::B, 2, Regime::near_zero);
  REQUIRE(b.terms.size() == 1);
  CHECK(b.terms[0].coeff == 368640);
}

TEST_CASE("the t-chart of A at n = 1") {
  auto a = build_model(Target::A, 1, Regime::near_infinity);
  REQUIRE(a.terms.size() == 3);
  auto* grow = a.find(0, Rational(-2), -2);
  REQUIRE(grow);
  CHECK(grow->coeff == -72);
  REQUIRE(a.find(1, Rational(0), -1));
  CHECK(a.find(1, Rational(0), -1)->coeff == 8640);
  REQUIRE(a.find(0, Rational(0), -2));
  CHECK(a.find(0, Rational(0), -2)->coeff == -23328);
}

TEST_CASE("B - A is (72/pi^2) psi_I(it) term by term") {
  const auto& psi_i = e8magic::modforms::catalog().get(FormId::PSI_I);
  for (int n : {1, 3, 6, 11}) {
    auto a = build_model(Target::A, n, Regime::near_infinity);
    auto b = build_model(Target::B, n, Regime::near_infinity);
    std::map<std::tuple<Rational, unsigned, int>, Rational> diff;
    for (const auto& t : b.terms) diff[{t.sigma_over_pi, t.p, t.pi_power}] += t.coeff;
    for (const auto& t : a.terms) diff[{t.sigma_over_pi, t.p, t.pi_power}] -= t.coeff;
    std::map<std::tuple<Rational, unsigned, int>, Rational> want;
    for (const auto& [e, c] : psi_i.terms())
      if (2 * e.exact() < n) want[{2 * e.exact(), 0u, -2}] = 72 * c;
    for (auto it = diff.begin(); it != diff.end();) it = it->second == 0 ? diff.erase(it) : std::next(it);
    CHECK(diff == want);
  }
}

TEST_CASE("B - A agrees numerically with psi_I") {
  const auto& psi_i = e8magic::modforms::catalog().get(FormId::PSI_I);
  e8magic::qseries::NumericSeries f(psi_i);
  for (double t : {0.7, 1.0, 1.6, 2.5}) {
    auto a = evaluate(Target::A, t);
    auto b = evaluate(Target::B, t);
    const double want = 72.0 / (std::numbers::pi * std::numbers::pi) * f.eval_imag_axis(t);
    CHECK(std::abs((b.value - a.value) - want) <= 1e-9 * std::abs(want) + a.err + b.err);
  }
}

TEST_CASE("model enclosures contain point values") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lo(0.5, 6.0), w(0.0, 0.3), frac(0.0, 1.0);
  for (auto target : {Target::A, Target::B})
    for (auto regime : {Regime::near_zero, Regime::near_infinity}) {
      auto m = build_model(target, 6, regime);
      for (int k = 0; k < 200; ++k) {
        double l = lo(rng);
        Interval x(l, l + w(rng));
        auto enc = m.enclose(x);
        double p = x.lo() + frac(rng) * x.width();
        CHECK(enc.contains(m.value(p)));
      }
    }
}

TEST_CASE("remainder envelope bounds the truncation error and decays") {
  for (auto target : {Target::A, Target::B})
    for (auto regime : {Regime::near_zero, Regime::near_infinity}) {
      auto m6 = build_model(target, 6, regime);
      auto m40 = build_model(target, 40, regime);
      double prev = INFINITY;
      for (double x : {1.0, 1.25, 1.5, 2.0, 3.0, 4.0}) {
        double env = remainder_envelope(6, regime, Interval(x)).hi();
        CHECK(std::abs(m40.value(x) - m6.value(x)) <= env);
        CHECK(env < prev);
        prev = env;
      }
    }
  CHECK_THROWS_AS(remainder_envelope(6, Regime::near_infinity, Interval(0.25, 1.0)), e8magic::InvalidInput);
  CHECK_THROWS_AS(build_model(Target::A, 0, Regime::near_zero), e8magic::InvalidInput);
}

TEST_CASE("A and B are certified with positive margins") {
  for (auto target : {Target::A, Target::B}) {
    auto cert = certify_sign(target);
    CAPTURE(to_string(target));
    CHECK(cert.certified);
    CHECK_FALSE(cert.failure.has_value());
    CHECK(cert.min_margin > 0.0);
    CHECK(cert.min_margin > 10.0 * cert.min_margin_width);
    REQUIRE(cert.tails.size() == 2);
    for (const auto& t : cert.tails) {
      CHECK(t.pass);
      CHECK(t.monotone);
      CHECK(t.epsilon_bound < 1.0);
    }
    // segments tile [1, 4] on each chart
    for (auto chart : {Regime::near_zero, Regime::near_infinity}) {
      double edge = 1.0;
      for (const auto& s : cert.segments)
        if (s.chart == chart) {
          CHECK(s.lo == edge);
          edge = s.hi;
          CHECK(s.margin > 0.0);
        }
      CHECK(edge == 4.0);
    }
    CHECK(cert.hypotheses.size() >= 5);
  }
}

TEST_CASE("serial and parallel bisection agree") {
  for (auto target : {Target::A, Target::B})
    for (int n : {6, 1}) {
      CertifyOptions o;
      o.n = o.m = n;
      o.parallel = false;
      auto s = certify_sign(target, o);
      o.parallel = true;
      auto p = certify_sign(target, o);
      CHECK(s.certified == p.certified);
      CHECK(s.segments == p.segments);
      CHECK(s.min_margin == p.min_margin);
      CHECK(to_json(s) == to_json(p));
    }
}

TEST_CASE("the one-term control fails") {
  for (auto target : {Target::A, Target::B}) {
    CertifyOptions o;
    o.n = o.m = 1;
    auto cert = certify_sign(target, o);
    CHECK_FALSE(cert.certified);
    REQUIRE(cert.failure.has_value());
    CHECK_FALSE(cert.failure->reason.empty());
  }
}

TEST_CASE("certificate JSON layout") {
  auto doc = to_json(certify_sign(Target::A));
  CHECK(doc.at("target") == "A");
  CHECK(doc.at("parameters").at("n") == 6);
  CHECK(doc.at("parameters").at("T_star") == 4.0);
  CHECK(doc.at("parameters").at("max_depth") == 60);
  CHECK(doc.at("status") == "certified");
  CHECK(doc.at("segments").size() > 0);
  CHECK(doc.at("segments")[0].contains("margin"));
  CHECK(doc.at("tail").size() == 2);
  CHECK(doc.at("hypotheses").size() >= 5);
}

TEST_CASE("A is negative and B positive on a dense sample") {
  for (int i = 1; i <= 400; ++i) {
    double t = 0.02 * i;
    auto a = evaluate(Target::A, t);
    auto b = evaluate(Target::B, t);
    CHECK(a.value + a.err < 0.0);
    CHECK(b.value - b.err > 0.0);
  }
}
