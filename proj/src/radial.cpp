#include "e8magic/radial.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <omp.h>

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>

#include "e8magic/error.hpp"
#include "e8magic/modforms.hpp"

namespace e8magic::radial {

namespace {

using cplx = std::complex<double>;
using modforms::FormId;
using namespace std::complex_literals;

constexpr double pi = std::numbers::pi;
constexpr double pi2 = pi * pi;
constexpr double pi3 = pi2 * pi;
constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double kQuadTol = 1e-13;
constexpr unsigned kQuadDepth = 12;

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

// Dense copy of a q-series: sum_k c_k q^{lead + k step}, evaluated by Horner in q^step.
struct Dense {
  double lead = 0.0;
  double step = 1.0;
  std::vector<double> c;

  explicit Dense(const qseries::QSeries& f) {
    if (f.is_zero()) return;
    lead = f.first_exponent().value();
    const std::int64_t s = f.stride().eighths();
    step = s > 0 ? static_cast<double>(s) / 8.0 : 1.0;
    const std::int64_t s8 = s > 0 ? s : 8;
    const std::int64_t first = f.first_exponent().eighths();
    const std::int64_t last = f.terms().rbegin()->first.eighths();
    c.assign(static_cast<std::size_t>((last - first) / s8 + 1), 0.0);
    for (const auto& [e, v] : f.terms()) c[static_cast<std::size_t>((e.eighths() - first) / s8)] = v.get_d();
  }

  cplx eval(cplx w) const {
    const cplx base = std::exp(2.0 * pi * 1i * step * w);
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * base + *it;
    return acc * std::exp(2.0 * pi * 1i * lead * w);
  }

  // f(iy)
  double eval_iy(double y) const {
    const double base = std::exp(-2.0 * pi * step * y);
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * base + *it;
    return acc * std::exp(-2.0 * pi * lead * y);
  }
};

struct Coeffs {
  std::vector<std::pair<double, double>> terms;  // (n, c(n))
  explicit Coeffs(const qseries::QSeries& f) {
    for (const auto& [e, v] : f.terms()) terms.emplace_back(e.value(), v.get_d());
  }
};

// Shared read-only data from the series catalog.
struct Forms {
  Dense phi0, psi_s;
  Coeffs c_phi0, c_phim2, c_phim4, c_psi_i, c_psi_s;
  // bounds on sum_{n >= order} |c(n)| e^{-2 pi n}
  double tail_phi = 0.0, tail_psi = 0.0;

  Forms()
      : phi0(cat(FormId::PHI_0)),
        psi_s(cat(FormId::PSI_S)),
        c_phi0(cat(FormId::PHI_0)),
        c_phim2(cat(FormId::PHI_M2)),
        c_phim4(cat(FormId::PHI_M4)),
        c_psi_i(cat(FormId::PSI_I)),
        c_psi_s(cat(FormId::PSI_S)) {
    auto tail = [](FormId id) {
      const auto& fi = modforms::info(id);
      return qseries::series_eval_at(cat(id), cplx(0.0, 1.0), fi.bound_constant, fi.bound_exponent).tail_bound;
    };
    tail_phi = tail(FormId::PHI_0) + 12.0 / pi * tail(FormId::PHI_M2) + 36.0 / pi2 * tail(FormId::PHI_M4);
    tail_psi = tail(FormId::PSI_I) + tail(FormId::PSI_S);
  }

  static const qseries::QSeries& cat(FormId id) { return modforms::catalog().get(id); }
};

const Forms& forms() {
  static const Forms f;
  return f;
}

// int_1^inf t^p e^{-lambda t} dt, lambda > 0
double laplace_tail(unsigned p, double lambda) {
  double acc = 0.0, fall = 1.0;
  for (unsigned j = 0; j <= p; ++j) {
    acc += fall / std::pow(lambda, static_cast<int>(j) + 1);
    fall *= static_cast<double>(p - j);
  }
  return std::exp(-lambda) * acc;
}

struct Quad {
  double value = 0.0;
  double err = 0.0;
  double l1 = 0.0;
};

template <class F>
Quad integrate(F f, double a, double b) {
  Quad q;
  q.value = GK::integrate(f, a, b, kQuadDepth, kQuadTol, &q.err, &q.l1);
  return q;
}

// sin(y)/y and its derivative, with series near 0
double sinc(double y) {
  if (std::fabs(y) < 1e-4) return 1.0 - y * y / 6.0;
  return std::sin(y) / y;
}
double sinc_prime(double y) {
  if (std::fabs(y) < 1e-3) return -y / 3.0 + y * y * y / 30.0;
  return (y * std::cos(y) - std::sin(y)) / (y * y);
}

// h(x) = sin^2(pi x/2)/x = sum_k (-1)^{k+1} pi^{2k} x^{2k-1} / (2 (2k)!)
double h_fn(double x) {
  if (std::fabs(x) < 0.05) {
    double acc = 0.0, fact = 1.0, px = 1.0;
    for (int k = 1; k <= 10; ++k) {
      fact *= (2.0 * k - 1.0) * (2.0 * k);
      px = (k == 1) ? pi2 * x : px * pi2 * x * x;
      acc += ((k % 2) ? 1.0 : -1.0) * px / (2.0 * fact);
    }
    return acc;
  }
  const double s = std::sin(pi * x / 2.0);
  return s * s / x;
}

double h_prime(double x) {
  if (std::fabs(x) < 0.05) {
    double acc = 0.0, fact = 1.0, px = 1.0;
    for (int k = 1; k <= 10; ++k) {
      fact *= (2.0 * k - 1.0) * (2.0 * k);
      px = (k == 1) ? pi2 : px * pi2 * x * x;
      acc += ((k % 2) ? 1.0 : -1.0) * (2.0 * k - 1.0) * px / (2.0 * fact);
    }
    return acc;
  }
  const double s = std::sin(pi * x / 2.0);
  return (pi / 2.0) * std::sin(pi * x) / x - s * s / (x * x);
}

// Pieces of the sin^2 prefactor as functions of x = r^2.
struct Prefactor {
  double S, dS;        // sin^2(pi x/2) and d/dx
  double s1, ds1;      // sin(pi x/2)/x and d/dx
  double sinY, cosY;
  explicit Prefactor(double x) {
    const double y = pi * x / 2.0;
    sinY = std::sin(y);
    cosY = std::cos(y);
    S = sinY * sinY;
    dS = (pi / 2.0) * std::sin(2.0 * y);
    s1 = (pi / 2.0) * sinc(y);
    ds1 = (pi / 2.0) * (pi / 2.0) * sinc_prime(y);
  }
};

// Laplace integrals I(x) = int_0^inf F(t) e^{-pi x t} dt with the growing part of F removed,
// and -(1/pi) dI/dx = int t F(t) e^{-pi x t} dt when moment = 1.
struct Laplace {
  double value = 0.0;
  double err = 0.0;
  double l1 = 0.0;  // magnitude scale for rounding
};

double Fa_near_zero(double t) {
  const double sub = -36.0 / pi2 * std::exp(2.0 * pi * t) + 8640.0 / pi * t - 18144.0 / pi2;
  if (t <= 0.0) return sub;
  return t * t * forms().phi0.eval_iy(1.0 / t) + sub;
}

double Fb_near_zero(double t) {
  const double sub = -144.0 - std::exp(2.0 * pi * t);
  if (t <= 0.0) return sub;
  return -t * t * forms().psi_s.eval_iy(1.0 / t) + sub;
}

Laplace laplace_a(double x, unsigned moment) {
  const Forms& F = forms();
  const Quad q = integrate(
      [&](double t) { return Fa_near_zero(t) * std::pow(t, static_cast<int>(moment)) * std::exp(-pi * x * t); },
      0.0, 1.0);
  Laplace out{q.value, q.err + F.tail_phi, q.l1};
  // t >= 1: F(t) = sum_{n >= 1} [c0 t^2 - (12/pi) c_{-2} t + (36/pi^2) c_{-4}] e^{-2 pi n t}
  auto add = [&](const Coeffs& cs, double scale, unsigned p) {
    for (const auto& [n, c] : cs.terms) {
      if (n < 1.0) continue;
      const double v = scale * c * laplace_tail(p + moment, 2.0 * pi * n + pi * x);
      out.value += v;
      out.l1 += std::fabs(v);
    }
  };
  add(F.c_phi0, 1.0, 2);
  add(F.c_phim2, -12.0 / pi, 1);
  add(F.c_phim4, 36.0 / pi2, 0);
  out.err += 5.0 * F.tail_phi + 64.0 * eps * out.l1;
  return out;
}

Laplace laplace_b(double x, unsigned moment) {
  const Forms& F = forms();
  const Quad q = integrate(
      [&](double t) { return Fb_near_zero(t) * std::pow(t, static_cast<int>(moment)) * std::exp(-pi * x * t); },
      0.0, 1.0);
  Laplace out{q.value, q.err + F.tail_psi, q.l1};
  for (const auto& [n, c] : F.c_psi_i.terms) {
    if (n <= 0.0) continue;
    const double v = c * laplace_tail(moment, 2.0 * pi * n + pi * x);
    out.value += v;
    out.l1 += std::fabs(v);
  }
  out.err += 5.0 * F.tail_psi + 64.0 * eps * out.l1;
  return out;
}

void check_r(double r, const char* who) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidInput(std::string(who) + ": r must be a finite nonnegative number");
  }
}

}  // namespace

const char* to_string(Fn f) {
  switch (f) {
    case Fn::a: return "a";
    case Fn::b: return "b";
    case Fn::g: return "g";
    case Fn::ghat: return "ghat";
  }
  return "?";
}

// Im a = 4 [ (36/pi^3) h(x-2) - (8640/pi^3) S/x^2 + (18144/pi^3) S/x + S I_a(x) ]
RadialValue eval_a(double r) {
  check_r(r, "eval_a");
  const double x = r * r;
  const Prefactor P(x);
  const Laplace I = laplace_a(x, 0);
  const std::array<double, 4> parts{36.0 / pi3 * h_fn(x - 2.0), -8640.0 / pi3 * P.s1 * P.s1,
                                    18144.0 / pi3 * P.s1 * P.sinY, P.S * I.value};
  double sum = 0.0, mag = 0.0;
  for (double p : parts) {
    sum += p;
    mag += std::fabs(p);
  }
  return {4.0 * sum, 4.0 * (P.S * I.err + 16.0 * eps * (mag + P.S * I.l1))};
}

// Im b = 4 [ (144/pi) S/x + (1/pi) h(x-2) + S I_b(x) ]
RadialValue eval_b(double r) {
  check_r(r, "eval_b");
  const double x = r * r;
  const Prefactor P(x);
  const Laplace I = laplace_b(x, 0);
  const std::array<double, 3> parts{144.0 / pi * P.s1 * P.sinY, h_fn(x - 2.0) / pi, P.S * I.value};
  double sum = 0.0, mag = 0.0;
  for (double p : parts) {
    sum += p;
    mag += std::fabs(p);
  }
  return {4.0 * sum, 4.0 * (P.S * I.err + 16.0 * eps * (mag + P.S * I.l1))};
}

RadialValue eval_a_deriv(double r) {
  check_r(r, "eval_a_deriv");
  if (r == 0.0) return {0.0, 0.0};
  const double x = r * r;
  const Prefactor P(x);
  const Laplace I = laplace_a(x, 0);
  const Laplace I1 = laplace_a(x, 1);  // dI/dx = -pi I1
  const std::array<double, 5> parts{36.0 / pi3 * h_prime(x - 2.0), -8640.0 / pi3 * 2.0 * P.s1 * P.ds1,
                                    18144.0 / pi3 * (P.ds1 * P.sinY + P.s1 * (pi / 2.0) * P.cosY),
                                    P.dS * I.value, -pi * P.S * I1.value};
  double sum = 0.0, mag = 0.0;
  for (double p : parts) {
    sum += p;
    mag += std::fabs(p);
  }
  const double err = std::fabs(P.dS) * I.err + pi * P.S * I1.err + 16.0 * eps * mag;
  return {8.0 * r * sum, 8.0 * r * err};
}

RadialValue eval_b_deriv(double r) {
  check_r(r, "eval_b_deriv");
  if (r == 0.0) return {0.0, 0.0};
  const double x = r * r;
  const Prefactor P(x);
  const Laplace I = laplace_b(x, 0);
  const Laplace I1 = laplace_b(x, 1);
  const std::array<double, 4> parts{144.0 / pi * (P.ds1 * P.sinY + P.s1 * (pi / 2.0) * P.cosY),
                                    h_prime(x - 2.0) / pi, P.dS * I.value, -pi * P.S * I1.value};
  double sum = 0.0, mag = 0.0;
  for (double p : parts) {
    sum += p;
    mag += std::fabs(p);
  }
  const double err = std::fabs(P.dS) * I.err + pi * P.S * I1.err + 16.0 * eps * mag;
  return {8.0 * r * sum, 8.0 * r * err};
}

namespace {

// g = -(pi/8640) Im a -/+ Im b/(240 pi)
RadialValue combine(const RadialValue& a, const RadialValue& b, Fn which) {
  const double ca = -pi / 8640.0;
  const double cb = (which == Fn::g ? -1.0 : 1.0) / (240.0 * pi);
  return {ca * a.value + cb * b.value, std::fabs(ca) * a.err + std::fabs(cb) * b.err};
}

void check_g(Fn which) {
  if (which != Fn::g && which != Fn::ghat) throw InvalidInput("eval_g: which must be g or ghat");
}

}  // namespace

RadialValue eval_g(double r, Fn which) {
  check_g(which);
  return combine(eval_a(r), eval_b(r), which);
}

RadialValue eval_g_deriv(double r, Fn which) {
  check_g(which);
  return combine(eval_a_deriv(r), eval_b_deriv(r), which);
}

RadialValue eval(Fn which, double r) {
  switch (which) {
    case Fn::a: return eval_a(r);
    case Fn::b: return eval_b(r);
    default: return eval_g(r, which);
  }
}

RadialValue eval_deriv(Fn which, double r) {
  switch (which) {
    case Fn::a: return eval_a_deriv(r);
    case Fn::b: return eval_b_deriv(r);
    default: return eval_g_deriv(r, which);
  }
}

// Im a = 4 S int_0^inf t^2 phi0(i/t) e^{-pi x t} dt,  Im b = -4 S int_0^inf psi_I(it) e^{-pi x t} dt
RadialValue eval_double_zero_form(double r, Fn which) {
  if (!(r > std::numbers::sqrt2)) throw InvalidInput("double-zero form requires r > sqrt 2");
  if (which != Fn::a && which != Fn::b) throw InvalidInput("double-zero form: which must be a or b");
  const Forms& F = forms();
  const double x = r * r;
  const Prefactor P(x);
  double value = 0.0, scale = 0.0, err = 0.0;
  auto add = [&](const Coeffs& cs, double s, unsigned p) {
    for (const auto& [n, c] : cs.terms) {
      const double v = s * c * laplace_tail(p, 2.0 * pi * n + pi * x);
      value += v;
      scale += std::fabs(v);
    }
  };
  if (which == Fn::a) {
    const Quad q = integrate(
        [&](double t) { return t <= 0.0 ? 0.0 : t * t * F.phi0.eval_iy(1.0 / t) * std::exp(-pi * x * t); }, 0.0,
        1.0);
    value = q.value;
    err = q.err + 6.0 * F.tail_phi;
    add(F.c_phi0, 1.0, 2);
    add(F.c_phim2, -12.0 / pi, 1);
    add(F.c_phim4, 36.0 / pi2, 0);
    value *= 4.0 * P.S;
  } else {
    const Quad q = integrate(
        [&](double t) { return t <= 0.0 ? 0.0 : -t * t * F.psi_s.eval_iy(1.0 / t) * std::exp(-pi * x * t); },
        0.0, 1.0);
    value = q.value;
    err = q.err + 6.0 * F.tail_psi;
    add(F.c_psi_i, 1.0, 0);
    value *= -4.0 * P.S;
  }
  return {value, 4.0 * P.S * (err + 64.0 * eps * scale)};
}

ContourValue contour_eval(double r, Fn which) {
  check_r(r, "contour_eval");
  if (which != Fn::a && which != Fn::b) throw InvalidInput("contour_eval: which must be a or b");
  const Forms& F = forms();
  const double x = r * r;
  const Dense& kernel = which == Fn::a ? F.phi0 : F.psi_s;

  // weight-0 (a) or weight -2 (b, through psi_T(z) = (z +- 1)^2 psi_S(-1/(z +- 1))) pullback
  auto pulled = [&](cplx w) { return w * w * kernel.eval(-1.0 / w); };

  double err = 0.0;
  cplx total = 0.0;
  auto leg = [&](const char* name, auto&& integrand) {
    double e_re = 0.0, e_im = 0.0, l1 = 0.0;
    const double re = GK::integrate([&](double s) { return integrand(s).real(); }, 0.0, 1.0, kQuadDepth, kQuadTol,
                                    &e_re, &l1);
    const double im = GK::integrate([&](double s) { return integrand(s).imag(); }, 0.0, 1.0, kQuadDepth, kQuadTol,
                                    &e_im, &l1);
    if (!std::isfinite(re) || !std::isfinite(im) || e_re > 1e-6 || e_im > 1e-6) {
      std::ostringstream msg;
      msg << "contour_eval(" << to_string(which) << ", r = " << r << "): quadrature on segment " << name
          << " did not converge (error estimate " << std::max(e_re, e_im) << ")";
      throw NumericalFailure(msg.str());
    }
    total += cplx(re, im);
    err += e_re + e_im + 16.0 * eps * l1;
  };

  // -1 -> i : z = -1 + s(1+i)
  leg("-1 -> i", [&](double s) -> cplx {
    if (s <= 0.0) return 0.0;
    const cplx w = s * (1.0 + 1i);
    const cplx z = -1.0 + w;
    return pulled(w) * std::exp(pi * 1i * x * z) * (1.0 + 1i);
  });
  // 1 -> i : z = 1 + s(-1+i)
  leg("1 -> i", [&](double s) -> cplx {
    if (s <= 0.0) return 0.0;
    const cplx w = s * (-1.0 + 1i);
    const cplx z = 1.0 + w;
    return pulled(w) * std::exp(pi * 1i * x * z) * (-1.0 + 1i);
  });
  // 0 -> i : z = i s; a: -2 phi0(-1/z) z^2, b: -2 psi_I(z) = -2 z^2 psi_S(-1/z)
  leg("0 -> i", [&](double s) -> cplx {
    if (s <= 0.0) return 0.0;
    const cplx z = 1i * s;
    return -2.0 * pulled(z) * std::exp(pi * 1i * x * z) * 1i;
  });
  // i -> i inf : a: 2 phi0(it), b: -2 psi_S(it), termwise
  {
    const Coeffs& cs = which == Fn::a ? F.c_phi0 : F.c_psi_s;
    const double sign = which == Fn::a ? 2.0 : -2.0;
    double acc = 0.0, mag = 0.0;
    for (const auto& [n, c] : cs.terms) {
      const double v = c * laplace_tail(0, 2.0 * pi * n + pi * x);
      acc += v;
      mag += std::fabs(v);
    }
    total += sign * 1i * acc;
    err += 2.0 * (which == Fn::a ? F.tail_phi : F.tail_psi) + 16.0 * eps * mag;
  }
  return {total.imag(), total.real(), err};
}

std::vector<RadialValue> tabulate(Fn which, double r_max, double h, bool parallel) {
  if (!(h > 0.0) || !(r_max >= 0.0)) throw InvalidInput("tabulate: need h > 0 and r_max >= 0");
  const long n = static_cast<long>(std::llround(r_max / h)) + 1;
  std::vector<RadialValue> out(static_cast<std::size_t>(n));
  forms();  // build shared data before the workers start
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = eval(which, static_cast<double>(i) * h);
  } else {
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = eval(which, static_cast<double>(i) * h);
  }
  return out;
}

namespace {

// a and b on the fixed grid; g and ghat are combined from them on demand
const std::vector<RadialValue>& hankel_table(Fn which) {
  static std::once_flag once_a, once_b;
  static std::vector<RadialValue> table_a, table_b;
  if (which == Fn::a) {
    std::call_once(once_a, [] { table_a = tabulate(Fn::a, kHankelRmax, kHankelStep); });
    return table_a;
  }
  std::call_once(once_b, [] { table_b = tabulate(Fn::b, kHankelRmax, kHankelStep); });
  return table_b;
}

// composite Boole rule over samples f_0..f_N with N divisible by 4
double boole(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i + 4 <= n; i += 4) {
    acc += 7.0 * (f[i] + f[i + 4]) + 32.0 * (f[i + 1] + f[i + 3]) + 12.0 * f[i + 2];
  }
  return acc * 2.0 * h / 45.0;
}

}  // namespace

RadialValue hankel_transform(const std::vector<RadialValue>& table, double h, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("hankel_transform: s must be positive");
  if (!(h > 0.0)) throw InvalidInput("hankel_transform: step must be positive");
  const std::size_t n = table.size();
  if (n < 9 || (n - 1) % 8 != 0) throw InvalidInput("hankel_transform: need 8k + 1 samples");

  std::vector<double> f(n);
  double sample_err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = static_cast<double>(i) * h;
    const double r4 = r * r * r * r;
    const double kernel = std::cyl_bessel_j(3.0, 2.0 * pi * r * s) * r4;
    f[i] = table[i].value * kernel;
    sample_err += table[i].err * std::fabs(kernel) * h;
  }

  std::vector<double> coarse;
  coarse.reserve(n / 2 + 1);
  for (std::size_t i = 0; i < n; i += 2) coarse.push_back(f[i]);
  const double fine_sum = boole(f, h);
  const double coarse_sum = boole(coarse, 2.0 * h);
  const double prefactor = 2.0 * pi / (s * s * s);
  // Richardson-style estimate for an O(h^6) rule
  const double quad_err = std::fabs(fine_sum - coarse_sum) / 63.0;
  return {prefactor * fine_sum, prefactor * (quad_err + sample_err)};
}

RadialValue hankel_fourier_oracle(Fn which, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("hankel_fourier_oracle: s must be positive");
  const auto& ta = hankel_table(Fn::a);
  const auto& tb = hankel_table(Fn::b);
  const std::vector<RadialValue>* table = &ta;
  std::vector<RadialValue> combined;
  if (which == Fn::b) {
    table = &tb;
  } else if (which != Fn::a) {
    combined.resize(ta.size());
    for (std::size_t i = 0; i < ta.size(); ++i) combined[i] = combine(ta[i], tb[i], which);
    table = &combined;
  }

  // the table must have decayed by R_max
  const double edge_r4 = std::pow(kHankelRmax, 4);
  if (std::fabs(table->back().value) * edge_r4 > 1e-12) {
    std::ostringstream msg;
    msg << "hankel_fourier_oracle: |f(" << kHankelRmax << ")| r^4 = " << std::fabs(table->back().value) * edge_r4
        << " has not decayed; enlarge the tabulation range";
    throw NumericalFailure(msg.str());
  }
  return hankel_transform(*table, kHankelStep, s);
}

}  // namespace e8magic::radial
