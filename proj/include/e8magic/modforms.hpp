#pragma once

// Catalog of the modular and quasimodular forms behind the magic function, with
// their transformation laws and the circle-method coefficient formula.

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "e8magic/qseries.hpp"

namespace e8magic::modforms {

using qseries::Exponent8;
using qseries::QSeries;

/// Default truncation: exponents below q^64.
inline constexpr int kDefaultOrder = 64;

enum class FormId {
  E2,
  E4,
  E6,
  J,
  TH00_4,
  TH01_4,
  TH10_4,
  VPHI_M2,
  VPHI_M4,
  PHI_M4,
  PHI_M2,
  PHI_0,
  H,
  PSI_I,
  PSI_T,
  PSI_S,
};

struct FormInfo {
  FormId id;
  std::string_view name;
  int weight;
  /// Growth hypothesis |c(n)| <= bound_constant * e^{bound_exponent sqrt(n)} for n > 0.
  double bound_constant;
  double bound_exponent;
  std::string_view bound_text;
};

const FormInfo& info(FormId id);
std::span<const FormId> all_forms();
/// Case-insensitive lookup by catalog name (E4, PHI_0, PSI_S, ...).
std::optional<FormId> parse_form_id(std::string_view name);

/// E_k for k in {2, 4, 6}, exponents below q^order.
QSeries eisenstein(int k, int order);

enum class ThetaKind { t00, t01, t10 };

/// The theta constant itself (lattice-sum truncation).
QSeries theta(ThetaKind kind, int order);
QSeries theta_pow4(ThetaKind kind, int order);

/// Builds a catalog form with every exponent below q^order exact. Throws
/// NumericalFailure if order is too small for the divisions involved.
QSeries build_form(FormId id, int order = kDefaultOrder);

/// Memoizing front end to build_form; safe for concurrent readers.
class Catalog {
 public:
  const QSeries& get(FormId id, int order = kDefaultOrder);
  /// Seeds the cache (used when series are loaded from disk). An existing entry is kept.
  void put(FormId id, int order, QSeries series);
  void clear();

 private:
  std::shared_mutex mutex_;
  std::map<std::pair<FormId, int>, std::unique_ptr<QSeries>> cache_;
};

Catalog& catalog();

enum class TransformLaw { S, T };

struct TransformCheck {
  std::complex<double> lhs;
  std::complex<double> rhs;
  double residual = 0.0;
  /// Sum of the evaluations' rigorous tail bounds, scaled by the law's multipliers.
  double bound = 0.0;
  bool pass = false;
};

/// Supported laws: S on E2, TH00_4, TH01_4, TH10_4 and PHI_0; T on the three theta
/// fourth powers. Passes iff residual <= bound + tolerance. Throws InvalidInput for an
/// unsupported pair or when Im z or Im(-1/z) is too small for a usable tail bound.
TransformCheck verify_transform(FormId id, TransformLaw law, std::complex<double> z,
                                int order = kDefaultOrder, double tolerance = 1e-8);

/// A_k(n) = sum over h mod k, gcd(h,k)=1, of e^{-2 pi i (n h + h')/k}, h h' = -1 mod k.
std::complex<double> kloosterman_sum(long k, long n);

enum class RademacherKind { J, VPHI_M2, VPHI_M4 };

/// Partial sum through k = k_max of the circle-method expansion of c(n), n >= 1.
double rademacher_coefficient(RademacherKind kind, long n, long k_max);

struct BoundReport {
  FormId id;
  bool pass = true;
  int checked = 0;
  double max_ratio = 0.0;
  Exponent8 worst_index{};
  std::optional<Exponent8> violation;
};

/// Checks |c(n)| <= C e^{beta sqrt(n)} for every stored n in (0, n_max].
BoundReport coefficient_bound_check(FormId id, const QSeries& f, double n_max);
BoundReport coefficient_bound_check(FormId id, double n_max);

}  // namespace e8magic::modforms
