#pragma once

// The E8 lattice: shell enumeration, Poisson-summation checks and the density bound
// delivered by the magic function.

#include <array>
#include <cstdint>
#include <map>

namespace e8magic::e8 {

/// Coordinates in half-units: actual coordinate = half[i] / 2.
struct LatticePoint {
  std::array<int, 8> half{};

  /// sum of half[i]^2, which is 4 |x|^2
  long quad_norm() const;
  /// |x|^2; an integer for lattice members.
  double norm2() const { return static_cast<double>(quad_norm()) / 4.0; }
  bool in_lattice() const;

  LatticePoint operator+(const LatticePoint& o) const;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct ShellTable {
  /// squared norm 2n -> number of lattice vectors of that norm; N(0) = 1.
  std::map<int, std::uint64_t> counts;
  int max_norm = 0;

  std::uint64_t count(int norm2) const;
};

/// Counts every lattice vector with |x|^2 <= max_norm. max_norm must be even and >= 2
/// (InvalidInput otherwise). Both paths give identical tables.
ShellTable enumerate_shells(int max_norm, bool parallel = true);

/// Depth-first walk of the integer coset and the half-integer coset with remaining-norm
/// pruning; calls visit(point) for every lattice vector with |x|^2 <= max_norm.
/// Intended for small max_norm (spot checks).
template <class Visit>
void for_each_point(int max_norm, Visit&& visit);

struct GaussianSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double discrepancy = 0.0;
  /// Rigorous bounds on the discarded shells of each side.
  double lhs_tail = 0.0;
  double rhs_tail = 0.0;
};

struct PoissonReport {
  double alpha = 0.0;
  int max_norm = 0;
  /// sum over L of e^{-pi alpha |x|^2} vs alpha^{-4} sum over L of e^{-pi |y|^2/alpha}
  GaussianSides self_dual;
  /// sum over L/sqrt2 of f vs 2^4 sum over sqrt2 L of fhat, same Gaussian
  GaussianSides scaled;
  /// f(x) = g(sqrt2 x): both sides reduce to sum over L of g and of ghat.
  double g_side = 0.0;
  double ghat_side = 0.0;
  /// sum over shells of N(2n) (|value| + err) for n >= 1 plus the error at 0.
  double g_err = 0.0;
  double ghat_err = 0.0;
  bool pass = false;
};

/// Throws InvalidInput for alpha <= 0, NumericalFailure (asking for a larger max_norm)
/// when a truncation tail exceeds tolerance.
PoissonReport poisson_check(double alpha, int max_norm = 40, double tolerance = 1e-10);
PoissonReport poisson_check(double alpha, const ShellTable& shells, double tolerance = 1e-10);

struct DensityReport {
  double g0 = 0.0;
  double ghat0 = 0.0;
  /// f(0)/fhat(0) = 2^4 g(0)/ghat(0)
  double ratio = 0.0;
  double ratio_err = 0.0;
  /// Vol B_8(0, 1/2) = pi^4/6144
  double ball_volume = 0.0;
  double bound = 0.0;
  double bound_err = 0.0;
  /// pi^4/384
  double target = 0.0;
  bool matches = false;
};

DensityReport density_bound();

// ---------------------------------------------------------------------------

template <class Visit>
void for_each_point(int max_norm, Visit&& visit) {
  const long budget = 4L * max_norm;
  LatticePoint p;
  auto rec = [&](auto&& self, int i, long left, int sum) -> void {
    if (i == 8) {
      if (((sum % 4) + 4) % 4 == 0) visit(p);
      return;
    }
    const int parity = p.half[0] & 1;
    int top = 0;
    while (static_cast<long>(top + 1) * (top + 1) <= left) ++top;
    for (int h = -top; h <= top; ++h) {
      if ((h & 1) != parity) continue;
      long sq = static_cast<long>(h) * h;
      p.half[i] = h;
      self(self, i + 1, left - sq, sum + h);
    }
  };
  int top = 0;
  while (static_cast<long>(top + 1) * (top + 1) <= budget) ++top;
  for (int first = -top; first <= top; ++first) {
    long sq = static_cast<long>(first) * first;
    p.half[0] = first;
    rec(rec, 1, budget - sq, first);
  }
}

}  // namespace e8magic::e8
