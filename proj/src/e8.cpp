#include "e8magic/e8.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "e8magic/error.hpp"
#include "e8magic/radial.hpp"

namespace e8magic::e8 {

namespace {

int isqrt(long v) {
  int r = static_cast<int>(std::sqrt(static_cast<double>(v)));
  while (static_cast<long>(r) * r > v) --r;
  while (static_cast<long>(r + 1) * (r + 1) <= v) ++r;
  return r;
}

// counts[q] += number of completions of coordinates i..7 with sum of squares q_so_far + ...
// and coordinate sum = 0 mod 4, all with the given parity.
void count_rec(int i, int parity, long left, long used, int sum_mod4, std::vector<std::uint64_t>& counts) {
  const int top = isqrt(left);
  const int start = ((top & 1) == parity) ? top : top - 1;
  if (i == 7) {
    for (int h = -start; h <= start; h += 2) {
      if ((((sum_mod4 + h) % 4) + 4) % 4 != 0) continue;
      counts[used + static_cast<long>(h) * h] += 1;
    }
    return;
  }
  for (int h = -start; h <= start; h += 2) {
    long sq = static_cast<long>(h) * h;
    count_rec(i + 1, parity, left - sq, used + sq, (((sum_mod4 + h) % 4) + 4) % 4, counts);
  }
}

struct Branch {
  int parity;
  int first;
};

std::vector<Branch> branches(long budget) {
  std::vector<Branch> out;
  const int top = isqrt(budget);
  for (int parity = 0; parity < 2; ++parity) {
    const int start = ((top & 1) == parity) ? top : top - 1;
    for (int h = -start; h <= start; h += 2) out.push_back({parity, h});
  }
  return out;
}

ShellTable to_table(const std::vector<std::uint64_t>& counts, int max_norm) {
  ShellTable t;
  t.max_norm = max_norm;
  for (std::size_t q = 0; q < counts.size(); ++q) {
    if (counts[q] == 0) continue;
    if (q % 8 != 0) throw NumericalFailure("enumeration produced a vector of odd norm");
    t.counts[static_cast<int>(q / 4)] = counts[q];
  }
  return t;
}

// Crude count of vectors of norm 2n: each half-unit coordinate satisfies |h| <= sqrt(8n)
// with a fixed parity, and there are two cosets.
double shell_count_majorant(double n) { return 2.0 * std::pow(std::sqrt(8.0 * n) + 1.0, 8); }

// Bound on sum_{n > n0} N(2n) e^{-c n}.
double shell_tail(double c, int n0) {
  double total = 0.0;
  for (int n = n0 + 1; n < n0 + 1000000; ++n) {
    double term = shell_count_majorant(n) * std::exp(-c * n);
    double ratio = shell_count_majorant(n + 1) / shell_count_majorant(n) * std::exp(-c);
    // the ratio decreases in n, so once below 1/2 the rest is geometric
    if (ratio < 0.5) return (total + term / (1.0 - ratio)) * (1.0 + 1e-12);
    total += term;
  }
  return std::numeric_limits<double>::infinity();
}

GaussianSides gaussian_sides(const ShellTable& shells, double lhs_rate, double rhs_scale, double rhs_rate) {
  // lhs = sum N(2n) e^{-lhs_rate n}, rhs = rhs_scale * sum N(2n) e^{-rhs_rate n}
  GaussianSides s;
  // smallest terms first
  for (auto it = shells.counts.rbegin(); it != shells.counts.rend(); ++it) {
    double n = it->first / 2.0;
    double cnt = static_cast<double>(it->second);
    s.lhs += cnt * std::exp(-lhs_rate * n);
    s.rhs += cnt * std::exp(-rhs_rate * n);
  }
  s.rhs *= rhs_scale;
  const int n0 = shells.max_norm / 2;
  s.lhs_tail = shell_tail(lhs_rate, n0);
  s.rhs_tail = rhs_scale * shell_tail(rhs_rate, n0);
  s.discrepancy = std::abs(s.lhs - s.rhs);
  return s;
}

}  // namespace

long LatticePoint::quad_norm() const {
  long q = 0;
  for (int h : half) q += static_cast<long>(h) * h;
  return q;
}

bool LatticePoint::in_lattice() const {
  const int parity = half[0] & 1;
  int sum = 0;
  for (int h : half) {
    if ((h & 1) != parity) return false;
    sum += h;
  }
  // sum of actual coordinates even <=> sum of half-units divisible by 4
  return ((sum % 4) + 4) % 4 == 0;
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
  LatticePoint r;
  for (int i = 0; i < 8; ++i) r.half[i] = half[i] + o.half[i];
  return r;
}

std::uint64_t ShellTable::count(int norm2) const {
  auto it = counts.find(norm2);
  return it == counts.end() ? 0 : it->second;
}

ShellTable enumerate_shells(int max_norm, bool parallel) {
  if (max_norm < 2 || max_norm % 2 != 0) throw InvalidInput("max_norm must be an even integer >= 2");
  const long budget = 4L * max_norm;
  const auto work = branches(budget);
  std::vector<std::uint64_t> total(budget + 1, 0);
  auto run_branch = [&](const Branch& b, std::vector<std::uint64_t>& counts) {
    long sq = static_cast<long>(b.first) * b.first;
    count_rec(1, b.parity, budget - sq, sq, ((b.first % 4) + 4) % 4, counts);
  };
  if (!parallel) {
    for (const auto& b : work) run_branch(b, total);
    return to_table(total, max_norm);
  }
  const long nwork = static_cast<long>(work.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(budget + 1, 0);
#pragma omp for schedule(dynamic, 1)
    for (long k = 0; k < nwork; ++k) run_branch(work[k], local);
#pragma omp critical(e8_merge)
    for (long q = 0; q <= budget; ++q) total[q] += local[q];
  }
  return to_table(total, max_norm);
}

PoissonReport poisson_check(double alpha, int max_norm, double tolerance) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be positive");
  return poisson_check(alpha, enumerate_shells(max_norm), tolerance);
}

PoissonReport poisson_check(double alpha, const ShellTable& shells, double tolerance) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be positive");
  constexpr double pi = std::numbers::pi;
  PoissonReport rep;
  rep.alpha = alpha;
  rep.max_norm = shells.max_norm;
  const double a4 = 1.0 / (alpha * alpha * alpha * alpha);
  // |x|^2 = 2n on L; on L/sqrt2 it is n; on sqrt2 L it is 4n
  rep.self_dual = gaussian_sides(shells, 2.0 * pi * alpha, a4, 2.0 * pi / alpha);
  rep.scaled = gaussian_sides(shells, pi * alpha, 16.0 * a4, 4.0 * pi / alpha);
  for (const auto* s : {&rep.self_dual, &rep.scaled})
    if (s->lhs_tail > tolerance || s->rhs_tail > tolerance)
      throw NumericalFailure("Poisson truncation tail exceeds tolerance; enlarge max_norm beyond " +
                             std::to_string(shells.max_norm));

  for (auto it = shells.counts.rbegin(); it != shells.counts.rend(); ++it) {
    double r = std::sqrt(static_cast<double>(it->first));
    double cnt = static_cast<double>(it->second);
    auto g = radial::eval_g(r, radial::Fn::g);
    auto gh = radial::eval_g(r, radial::Fn::ghat);
    rep.g_side += cnt * g.value;
    rep.ghat_side += cnt * gh.value;
    if (it->first == 0) {
      rep.g_err += g.err;
      rep.ghat_err += gh.err;
    } else {
      rep.g_err += cnt * (std::abs(g.value) + g.err);
      rep.ghat_err += cnt * (std::abs(gh.value) + gh.err);
    }
  }

  auto gaussian_ok = [&](const GaussianSides& s) {
    double slack = s.lhs_tail + s.rhs_tail + 64 * std::numeric_limits<double>::epsilon() * (s.lhs + s.rhs);
    return s.discrepancy <= slack && s.discrepancy < tolerance;
  };
  rep.pass = gaussian_ok(rep.self_dual) && gaussian_ok(rep.scaled) && std::abs(rep.g_side - 1.0) <= rep.g_err &&
             std::abs(rep.ghat_side - 1.0) <= rep.ghat_err;
  return rep;
}

DensityReport density_bound() {
  constexpr double pi = std::numbers::pi;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  DensityReport d;
  auto g0 = radial::eval_g(0.0, radial::Fn::g);
  auto gh0 = radial::eval_g(0.0, radial::Fn::ghat);
  d.g0 = g0.value;
  d.ghat0 = gh0.value;
  // fhat(y) = 2^{-4} ghat(y/sqrt2) for f(x) = g(sqrt2 x)
  d.ratio = 16.0 * g0.value / gh0.value;
  d.ratio_err = 16.0 * (g0.err / std::abs(gh0.value) + std::abs(g0.value) * gh0.err / (gh0.value * gh0.value)) +
                4 * eps * std::abs(d.ratio);
  const double pi4 = pi * pi * pi * pi;
  d.ball_volume = pi4 / 6144.0;
  d.bound = d.ratio * d.ball_volume;
  d.bound_err = d.ratio_err * d.ball_volume + 8 * eps * std::abs(d.bound);
  d.target = pi4 / 384.0;
  d.matches = std::abs(d.bound - d.target) <= d.bound_err && d.bound_err < 1e-8;
  return d;
}

}  // namespace e8magic::e8
