#pragma once

// Sign certification of A(t) < 0 and B(t) > 0 on (0, inf) by truncated
// exponential-polynomial models, remainder envelopes and interval bisection.
//
//   A(t) = -t^2 phi0(i/t) - (36/pi^2) psi_I(it),  B(t) = -t^2 phi0(i/t) + (36/pi^2) psi_I(it)
//
// Chart t (t >= 1) expands in e^{-pi k t}; chart u = 1/t (t <= 1) expands A/t^2 in e^{-pi k u}.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "e8magic/modforms.hpp"
#include "e8magic/rigor.hpp"

namespace e8magic::certify {

using qseries::Rational;
using rigor::Interval;

enum class Target { A, B };
/// near_zero: variable u = 1/t, model is A/t^2. near_infinity: variable t.
enum class Regime { near_zero, near_infinity };

const char* to_string(Target t);
const char* to_string(Regime r);

/// coeff * pi^pi_power * x^p * e^{-pi * sigma_over_pi * x}
struct ModelTerm {
  Rational coeff;
  int pi_power = 0;
  unsigned p = 0;
  Rational sigma_over_pi;

  Interval enclose(const Interval& x) const;
  double value(double x) const;
  friend bool operator==(const ModelTerm&, const ModelTerm&) = default;
};

struct ExpPolyModel {
  Target target = Target::A;
  Regime regime = Regime::near_infinity;
  int n = 0;
  /// Canonical order: by (sigma, p, pi_power); like terms merged, zeros dropped.
  std::vector<ModelTerm> terms;

  Interval enclose(const Interval& x) const;
  double value(double x) const;
  const ModelTerm* find(unsigned p, const Rational& sigma_over_pi, int pi_power) const;
};

/// Keeps the terms e^{-pi k x} with k < n. Throws InvalidInput if n < 1 or the catalog
/// order cannot supply the coefficients.
ExpPolyModel build_model(Target target, int n, Regime regime, int order = modforms::kDefaultOrder);

/// Rigorous enclosure of the remainder bound with cutoff m on the chart variable x.
/// Requires x >= 1/2 (the tail series needs the chart variable bounded below).
Interval remainder_envelope(int m, Regime regime, const Interval& x);

struct CertifyOptions {
  int n = 6;
  int m = 6;
  double t_star = 4.0;
  double u_star = 4.0;
  int max_depth = 60;
  bool parallel = true;
  /// Breadth-first levels expanded before the frontier is handed to worker threads.
  int spawn_depth = 6;
};

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  Regime chart = Regime::near_infinity;
  double model_lo = 0.0;
  double model_hi = 0.0;
  double env_hi = 0.0;
  double margin = 0.0;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct TailRecord {
  Regime chart = Regime::near_infinity;
  double start = 0.0;
  std::string dominant;
  /// Upper bound of epsilon(start); every term of epsilon is checked monotone beyond start.
  double epsilon_bound = 0.0;
  bool monotone = false;
  bool pass = false;
};

struct Failure {
  Regime chart = Regime::near_infinity;
  double lo = 0.0;
  double hi = 0.0;
  std::string reason;
};

struct Certificate {
  Target target = Target::A;
  CertifyOptions options;
  std::vector<std::string> hypotheses;
  std::vector<Segment> segments;
  std::vector<TailRecord> tails;
  bool certified = false;
  std::optional<Failure> failure;
  double min_margin = 0.0;
  /// Width of the model enclosure at the midpoint of the minimal-margin leaf.
  double min_margin_width = 0.0;
};

/// Bisects [1, t_star] (chart t) and [1, u_star] (chart u), then closes both far tails.
/// Serial and parallel runs produce identical certificates.
Certificate certify_sign(Target target, const CertifyOptions& options = {});

nlohmann::json to_json(const Certificate& cert);

/// Non-rigorous point value of A(t) or B(t) for plots: the model with n terms in the
/// better chart, with the remainder envelope as the error estimate.
struct PointValue {
  double value = 0.0;
  double err = 0.0;
};
PointValue evaluate(Target target, double t, int n = 40);

}  // namespace e8magic::certify
