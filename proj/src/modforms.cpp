#include "e8magic/modforms.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "e8magic/error.hpp"

namespace e8magic::modforms {

using qseries::Rational;

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Polynomial growth of holomorphic coefficients is dominated by these exponentials:
// sigma_{k-1}(n) <= n^k <= e^{k sqrt n}; a theta^4 coefficient counts points of a
// 4-dimensional shifted lattice in a ball, at most (2 sqrt(2n) + 1)^4 <= e^{4 pi sqrt n}.
constexpr std::array<FormInfo, 16> kForms{{
    {FormId::E2, "E2", 2, 24.0, 2.0, "|c_E2(n)| <= 24 e^{2 sqrt n}"},
    {FormId::E4, "E4", 4, 240.0, 4.0, "|c_E4(n)| <= 240 e^{4 sqrt n}"},
    {FormId::E6, "E6", 6, 504.0, 6.0, "|c_E6(n)| <= 504 e^{6 sqrt n}"},
    {FormId::J, "J", 0, 1.0, kFourPi, "|c_j(n)| <= e^{4 pi sqrt n}"},
    {FormId::TH00_4, "TH00_4", 2, 1.0, kFourPi, "|c_th00^4(n)| <= e^{4 pi sqrt n}"},
    {FormId::TH01_4, "TH01_4", 2, 1.0, kFourPi, "|c_th01^4(n)| <= e^{4 pi sqrt n}"},
    {FormId::TH10_4, "TH10_4", 2, 1.0, kFourPi, "|c_th10^4(n)| <= e^{4 pi sqrt n}"},
    {FormId::VPHI_M2, "VPHI_M2", -2, 2.0, kFourPi, "|c_vphi-2(n)| <= 2 e^{4 pi sqrt n}"},
    {FormId::VPHI_M4, "VPHI_M4", -4, 1.0, kFourPi, "|c_vphi-4(n)| <= e^{4 pi sqrt n}"},
    {FormId::PHI_M4, "PHI_M4", -4, 1.0, kFourPi, "|c_phi-4(n)| <= e^{4 pi sqrt n}"},
    {FormId::PHI_M2, "PHI_M2", -2, 1.0, kFourPi, "|c_phi-2(n)| <= e^{4 pi sqrt n}"},
    {FormId::PHI_0, "PHI_0", 0, 2.0, kFourPi, "|c_phi0(n)| <= 2 e^{4 pi sqrt n}"},
    {FormId::H, "H", -2, 1.0, kFourPi, "|c_h(n)| <= e^{4 pi sqrt n}"},
    {FormId::PSI_I, "PSI_I", -2, 1.0, kFourPi, "|c_psiI(n)| <= e^{4 pi sqrt n}"},
    {FormId::PSI_T, "PSI_T", -2, 1.0, kFourPi, "|c_psiT(n)| <= e^{4 pi sqrt n}"},
    {FormId::PSI_S, "PSI_S", -2, 2.0, kFourPi, "|c_psiS(n)| <= 2 e^{4 pi sqrt n}"},
}};

constexpr std::array<FormId, 16> kAllForms{
    FormId::E2,      FormId::E4,      FormId::E6,     FormId::J,      FormId::TH00_4, FormId::TH01_4,
    FormId::TH10_4,  FormId::VPHI_M2, FormId::VPHI_M4, FormId::PHI_M4, FormId::PHI_M2, FormId::PHI_0,
    FormId::H,       FormId::PSI_I,   FormId::PSI_T,  FormId::PSI_S,
};

mpz_class divisor_power_sum(long n, unsigned power) {
  mpz_class acc = 0;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), power);
    acc += t;
    const long other = n / d;
    if (other != d) {
      mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(other), power);
      acc += t;
    }
  }
  return acc;
}

QSeries integer_series(int lead, int order) {
  return QSeries(Exponent8::integer(lead), Exponent8::integer(order));
}

// 1728 E4^2 / (E4^3 - E6^2) and friends share the same building blocks
struct Blocks {
  QSeries e2, e4, e6, delta1728;
};

Blocks eisenstein_blocks(int order) {
  Blocks b;
  b.e2 = eisenstein(2, order);
  b.e4 = eisenstein(4, order);
  b.e6 = eisenstein(6, order);
  b.delta1728 = b.e4 * b.e4 * b.e4 - b.e6 * b.e6;
  return b;
}

struct ThetaBlocks {
  QSeries t00, t01, t10;
};

ThetaBlocks theta_blocks(int order) {
  return {theta_pow4(ThetaKind::t00, order), theta_pow4(ThetaKind::t01, order),
          theta_pow4(ThetaKind::t10, order)};
}

QSeries vphi_m4(const Blocks& b) { return series_div(Rational(1728) * (b.e4 * b.e4), b.delta1728); }
QSeries vphi_m2(const Blocks& b) { return series_div(Rational(-1728) * (b.e4 * b.e6), b.delta1728); }
QSeries j_invariant(const Blocks& b) {
  return series_div(Rational(1728) * (b.e4 * b.e4 * b.e4), b.delta1728);
}

QSeries h_form(const ThetaBlocks& t) {
  return series_div(Rational(128) * (t.t00 + t.t01), t.t10 * t.t10);
}

QSeries build_unchecked(FormId id, int work) {
  switch (id) {
    case FormId::E2: return eisenstein(2, work);
    case FormId::E4: return eisenstein(4, work);
    case FormId::E6: return eisenstein(6, work);
    case FormId::TH00_4: return theta_pow4(ThetaKind::t00, work);
    case FormId::TH01_4: return theta_pow4(ThetaKind::t01, work);
    case FormId::TH10_4: return theta_pow4(ThetaKind::t10, work);
    case FormId::J: return j_invariant(eisenstein_blocks(work));
    case FormId::VPHI_M2: return vphi_m2(eisenstein_blocks(work));
    case FormId::VPHI_M4:
    case FormId::PHI_M4: return vphi_m4(eisenstein_blocks(work));
    case FormId::PHI_M2: {
      const Blocks b = eisenstein_blocks(work);
      return vphi_m4(b) * b.e2 + vphi_m2(b);
    }
    case FormId::PHI_0: {
      const Blocks b = eisenstein_blocks(work);
      const QSeries m4 = vphi_m4(b);
      const QSeries m2 = vphi_m2(b);
      return m4 * b.e2 * b.e2 + Rational(2) * (m2 * b.e2) + j_invariant(b) - Rational(1728);
    }
    case FormId::H: return h_form(theta_blocks(work));
    case FormId::PSI_I: {
      const ThetaBlocks t = theta_blocks(work);
      return h_form(t) + series_div(Rational(128) * (t.t01 - t.t10), t.t00 * t.t00);
    }
    case FormId::PSI_T: {
      const ThetaBlocks t = theta_blocks(work);
      return h_form(t) + series_div(Rational(128) * (t.t00 + t.t10), t.t01 * t.t01);
    }
    case FormId::PSI_S: {
      const ThetaBlocks t = theta_blocks(work);
      return series_div(Rational(-128) * (t.t00 + t.t10), t.t01 * t.t01) -
             series_div(Rational(128) * (t.t10 - t.t01), t.t00 * t.t00);
    }
  }
  throw InvalidInput("unknown form id");
}

}  // namespace

const FormInfo& info(FormId id) {
  for (const auto& f : kForms) {
    if (f.id == id) return f;
  }
  throw InvalidInput("unknown form id");
}

std::span<const FormId> all_forms() { return kAllForms; }

std::optional<FormId> parse_form_id(std::string_view name) {
  auto upper = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
  };
  const std::string key = upper(name);
  for (const auto& f : kForms) {
    if (upper(f.name) == key) return f.id;
  }
  return std::nullopt;
}

QSeries eisenstein(int k, int order) {
  long scale = 0;
  switch (k) {
    case 2: scale = -24; break;
    case 4: scale = 240; break;
    case 6: scale = -504; break;
    default: throw InvalidInput("eisenstein: unsupported weight " + std::to_string(k));
  }
  if (order < 1) throw InvalidInput("eisenstein: order must be positive");
  QSeries out = integer_series(0, order);
  out.set(Exponent8(0), 1);
  for (long n = 1; n < order; ++n) {
    out.set(Exponent8::integer(n), Rational(mpz_class(scale) * divisor_power_sum(n, k - 1)));
  }
  return out;
}

QSeries theta(ThetaKind kind, int order) {
  if (order < 1) throw InvalidInput("theta: order must be positive");
  QSeries out = integer_series(0, order);
  const std::int64_t limit = 8LL * order;
  // exponent in eighths: 4 n^2 for theta_00/01, (2n+1)^2 for theta_10
  for (std::int64_t n = -2 * order - 2; n <= 2 * order + 2; ++n) {
    const std::int64_t e = (kind == ThetaKind::t10) ? (2 * n + 1) * (2 * n + 1) : 4 * n * n;
    if (e >= limit) continue;
    const int sign = (kind == ThetaKind::t01 && (n % 2 != 0)) ? -1 : 1;
    out.add_to(Exponent8(e), Rational(sign));
  }
  return out;
}

QSeries theta_pow4(ThetaKind kind, int order) { return qseries::series_pow(theta(kind, order), 4); }

QSeries build_form(FormId id, int order) {
  if (order < 1) throw InvalidInput("build_form: order must be positive");
  // Divisions by forms with lead exponent 1 consume two orders of validity.
  const int work = order + 3;
  const QSeries raw = build_unchecked(id, work);
  if (raw.order() < Exponent8::integer(order)) {
    std::ostringstream msg;
    msg << "build_form(" << info(id).name << "): reached order " << raw.order().value()
        << " below the requested " << order;
    throw NumericalFailure(msg.str());
  }
  return raw.truncated(Exponent8::integer(order));
}

const QSeries& Catalog::get(FormId id, int order) {
  const auto key = std::make_pair(id, order);
  {
    std::shared_lock lock(mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  auto built = std::make_unique<QSeries>(build_form(id, order));
  std::unique_lock lock(mutex_);
  auto [it, inserted] = cache_.try_emplace(key, std::move(built));
  return *it->second;
}

void Catalog::put(FormId id, int order, QSeries series) {
  std::unique_lock lock(mutex_);
  // never replaces: references handed out by get() stay valid
  cache_.try_emplace(std::make_pair(id, order), std::make_unique<QSeries>(std::move(series)));
}

void Catalog::clear() {
  std::unique_lock lock(mutex_);
  cache_.clear();
}

Catalog& catalog() {
  static Catalog instance;
  return instance;
}

namespace {

struct Evaluated {
  std::complex<double> value;
  double tail;
};

Evaluated eval_form(FormId id, std::complex<double> z, int order) {
  const FormInfo& fi = info(id);
  const auto r = qseries::series_eval_at(catalog().get(id, order), z, fi.bound_constant, fi.bound_exponent);
  return {r.value, r.tail_bound};
}

constexpr double kMinUsableIm = 0.1;

}  // namespace

TransformCheck verify_transform(FormId id, TransformLaw law, std::complex<double> z, int order,
                                double tolerance) {
  using namespace std::complex_literals;
  constexpr double pi = std::numbers::pi;
  const std::complex<double> w = -1.0 / z;
  if (z.imag() < kMinUsableIm || (law == TransformLaw::S && w.imag() < kMinUsableIm)) {
    std::ostringstream msg;
    msg << "verify_transform: z = " << z << " outside the usable region Im z >= " << kMinUsableIm
        << (law == TransformLaw::S ? " and Im(-1/z) >= 0.1" : "");
    throw InvalidInput(msg.str());
  }

  TransformCheck out;
  if (law == TransformLaw::S) {
    const std::complex<double> zm2 = 1.0 / (z * z);
    const double zm2_abs = std::abs(zm2);
    switch (id) {
      case FormId::E2: {
        const auto l = eval_form(FormId::E2, w, order);
        const auto r = eval_form(FormId::E2, z, order);
        out.lhs = zm2 * l.value;
        out.rhs = r.value - (6.0i / pi) / z;
        out.bound = zm2_abs * l.tail + r.tail;
        break;
      }
      case FormId::TH00_4:
      case FormId::TH01_4:
      case FormId::TH10_4: {
        const FormId partner = id == FormId::TH00_4   ? FormId::TH00_4
                               : id == FormId::TH01_4 ? FormId::TH10_4
                                                      : FormId::TH01_4;
        const auto l = eval_form(id, w, order);
        const auto r = eval_form(partner, z, order);
        out.lhs = zm2 * l.value;
        out.rhs = -r.value;
        out.bound = zm2_abs * l.tail + r.tail;
        break;
      }
      case FormId::PHI_0: {
        const auto l = eval_form(FormId::PHI_0, w, order);
        const auto p0 = eval_form(FormId::PHI_0, z, order);
        const auto p2 = eval_form(FormId::PHI_M2, z, order);
        const auto p4 = eval_form(FormId::PHI_M4, z, order);
        const std::complex<double> m2 = (12.0i / pi) / z;
        const std::complex<double> m4 = (36.0 / (pi * pi)) * zm2;
        out.lhs = l.value;
        out.rhs = p0.value - m2 * p2.value - m4 * p4.value;
        out.bound = l.tail + p0.tail + std::abs(m2) * p2.tail + std::abs(m4) * p4.tail;
        break;
      }
      default: throw InvalidInput("verify_transform: no S law recorded for " + std::string(info(id).name));
    }
  } else {
    const std::complex<double> z1 = z + 1.0;
    FormId partner;
    double sign = 1.0;
    switch (id) {
      case FormId::TH00_4: partner = FormId::TH01_4; break;
      case FormId::TH01_4: partner = FormId::TH00_4; break;
      case FormId::TH10_4:
        partner = FormId::TH10_4;
        sign = -1.0;
        break;
      default: throw InvalidInput("verify_transform: no T law recorded for " + std::string(info(id).name));
    }
    const auto l = eval_form(id, z1, order);
    const auto r = eval_form(partner, z, order);
    out.lhs = l.value;
    out.rhs = sign * r.value;
    out.bound = l.tail + r.tail;
  }
  out.residual = std::abs(out.lhs - out.rhs);
  out.pass = out.residual <= out.bound + tolerance;
  return out;
}

namespace {

long mod_inverse(long a, long m) {
  // extended Euclid; a and m coprime
  long old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    const long q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  return ((old_s % m) + m) % m;
}

}  // namespace

std::complex<double> kloosterman_sum(long k, long n) {
  if (k < 1) throw InvalidInput("kloosterman_sum: modulus must be positive");
  if (k == 1) return 1.0;
  std::complex<double> acc = 0.0;
  for (long h = 0; h < k; ++h) {
    if (std::gcd(h, k) != 1) continue;
    const long hp = (k - mod_inverse(h, k)) % k;  // h h' = -1 mod k
    const long phase = ((n % k) * h + hp) % k;
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(k);
    acc += std::polar(1.0, angle);
  }
  return acc;
}

double rademacher_coefficient(RademacherKind kind, long n, long k_max) {
  if (n < 1 || k_max < 1) throw InvalidInput("rademacher_coefficient: n and k_max must be positive");
  // weight kappa = 0, -2, -4 uses I_{1-kappa}. For vphi_{-2} the principal part -q^{-1}
  // and the multiplier i^{kappa} = -1 cancel.
  double nu = 1.0, kappa = 0.0;
  switch (kind) {
    case RademacherKind::J: break;
    case RademacherKind::VPHI_M2:
      nu = 3.0;
      kappa = -2.0;
      break;
    case RademacherKind::VPHI_M4:
      nu = 5.0;
      kappa = -4.0;
      break;
  }
  const double nd = static_cast<double>(n);
  const double arg = 4.0 * std::numbers::pi * std::sqrt(nd);
  double acc = 0.0;
  for (long k = 1; k <= k_max; ++k) {
    const double a = kloosterman_sum(k, n).real();
    if (a == 0.0) continue;
    const double kd = static_cast<double>(k);
    acc += a / kd * std::cyl_bessel_i(nu, arg / kd);
  }
  return 2.0 * std::numbers::pi * std::pow(nd, (kappa - 1.0) / 2.0) * acc;
}

BoundReport coefficient_bound_check(FormId id, const QSeries& f, double n_max) {
  const FormInfo& fi = info(id);
  BoundReport rep;
  rep.id = id;
  for (const auto& [e, c] : f.terms()) {
    const double n = e.value();
    if (n <= 0.0) continue;
    if (n > n_max) break;
    ++rep.checked;
    const double ratio = std::fabs(c.get_d()) / (fi.bound_constant * std::exp(fi.bound_exponent * std::sqrt(n)));
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.worst_index = e;
    }
    if (ratio > 1.0 && !rep.violation) {
      rep.pass = false;
      rep.violation = e;
    }
  }
  return rep;
}

BoundReport coefficient_bound_check(FormId id, double n_max) {
  const int order = std::max(kDefaultOrder, static_cast<int>(std::ceil(n_max)) + 1);
  return coefficient_bound_check(id, catalog().get(id, order), n_max);
}

}  // namespace e8magic::modforms
