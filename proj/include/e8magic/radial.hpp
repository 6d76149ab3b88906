#pragma once

// Radial eigenfunctions a (Fourier-invariant) and b (anti-invariant) in dimension 8,
// and the magic function g = (pi i/8640) a + (i/(240 pi)) b.
//
// a and b take values in iR; their imaginary parts are reported. g and ghat are real.

#include <vector>

namespace e8magic::radial {

enum class Fn { a, b, g, ghat };

const char* to_string(Fn f);

struct RadialValue {
  double value = 0.0;
  /// Quadrature estimate + series tail bound + rounding allowance.
  double err = 0.0;
};

/// Im a(r) and Im b(r) from the single Laplace-integral representation (all r >= 0).
RadialValue eval_a(double r);
RadialValue eval_b(double r);
/// d/dr Im a(r), d/dr Im b(r) for r > 0.
RadialValue eval_a_deriv(double r);
RadialValue eval_b_deriv(double r);

/// which in {g, ghat}.
RadialValue eval_g(double r, Fn which);
RadialValue eval_g_deriv(double r, Fn which);

/// Dispatch on any of the four functions (a and b report imaginary parts).
RadialValue eval(Fn which, double r);
RadialValue eval_deriv(Fn which, double r);

/// The sin^2 (pi r^2/2) times Laplace-integral form, valid for r > sqrt 2 only.
/// which in {a, b}.
RadialValue eval_double_zero_form(double r, Fn which);

struct ContourValue {
  /// Imaginary part of the contour integral.
  double value = 0.0;
  /// Real part, zero in exact arithmetic.
  double real_part = 0.0;
  double err = 0.0;
};

/// Direct quadrature of the defining contour integrals (paths -1 -> i, 1 -> i, 0 -> i and
/// i -> i inf). which in {a, b}. Throws NumericalFailure naming a segment that fails to converge.
ContourValue contour_eval(double r, Fn which);

/// Values on r = 0, h, 2h, ..., r_max. The parallel and serial paths return identical data.
std::vector<RadialValue> tabulate(Fn which, double r_max, double h, bool parallel = true);

inline constexpr double kHankelRmax = 12.0;
inline constexpr double kHankelStep = 1e-3;

/// 2 pi s^{-3} int f(r) J_3(2 pi r s) r^4 dr for samples f(i h), i = 0..8k, by the composite
/// Boole rule; err adds the fine/coarse difference over 63 and the propagated sample errors.
RadialValue hankel_transform(const std::vector<RadialValue>& table, double h, double s);

/// 8-dimensional radial Fourier transform 2 pi s^{-3} int f(r) J_3(2 pi r s) r^4 dr of the
/// tabulated function (composite Boole rule). Tables are built once and shared.
RadialValue hankel_fourier_oracle(Fn which, double s);

}  // namespace e8magic::radial
