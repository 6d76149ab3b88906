#include "e8magic/certify.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "e8magic/error.hpp"

namespace e8magic::certify {

namespace cst = rigor::constants;
using modforms::FormId;
using qseries::Exponent8;

const char* to_string(Target t) { return t == Target::A ? "A" : "B"; }
const char* to_string(Regime r) { return r == Regime::near_zero ? "u" : "t"; }

namespace {

// mpq -> double truncates, so one ulp each way encloses the exact value
Interval enclose_rational(const Rational& q) {
  const double d = q.get_d();
  if (Rational(d) == q) return Interval(d);
  return rigor::around(d);
}

Interval pi_pow(int e) {
  Interval out(1.0);
  const Interval base = e >= 0 ? cst::pi() : cst::inv_pi();
  for (int i = 0; i < std::abs(e); ++i) out = out * base;
  return out;
}

std::string term_text(const ModelTerm& t) {
  std::ostringstream os;
  os << qseries::to_string(t.coeff);
  if (t.pi_power != 0) os << "*pi^" << t.pi_power;
  if (t.p > 0) os << "*x^" << t.p;
  if (t.sigma_over_pi > 0) os << "*e^(-" << qseries::to_string(t.sigma_over_pi) << "*pi*x)";
  if (t.sigma_over_pi < 0) os << "*e^(" << qseries::to_string(-t.sigma_over_pi) << "*pi*x)";
  return os.str();
}

}  // namespace

Interval ModelTerm::enclose(const Interval& x) const {
  const Interval c = enclose_rational(coeff) * pi_pow(pi_power);
  const Interval sigma = cst::pi() * enclose_rational(sigma_over_pi);
  return rigor::ia_exp_poly(c, p, sigma, x);
}

double ModelTerm::value(double x) const {
  constexpr double pi = std::numbers::pi;
  return coeff.get_d() * std::pow(pi, pi_power) * std::pow(x, static_cast<int>(p)) *
         std::exp(-pi * sigma_over_pi.get_d() * x);
}

Interval ExpPolyModel::enclose(const Interval& x) const {
  Interval acc(0.0);
  for (const auto& t : terms) acc += t.enclose(x);
  return acc;
}

double ExpPolyModel::value(double x) const {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.value(x);
  return acc;
}

const ModelTerm* ExpPolyModel::find(unsigned p, const Rational& sigma_over_pi, int pi_power) const {
  for (const auto& t : terms) {
    if (t.p == p && t.sigma_over_pi == sigma_over_pi && t.pi_power == pi_power) return &t;
  }
  return nullptr;
}

ExpPolyModel build_model(Target target, int n, Regime regime, int order) {
  if (n < 1) throw InvalidInput("build_model: cutoff n must be at least 1");
  if (n > 2 * order) {
    throw InvalidInput("build_model: cutoff n = " + std::to_string(n) + " needs series order >= " +
                       std::to_string((n + 1) / 2));
  }
  auto& cat = modforms::catalog();
  const int sign = target == Target::A ? -1 : 1;

  using Key = std::tuple<Rational, unsigned, int>;  // sigma/pi, p, pi power
  std::map<Key, Rational> acc;
  // coefficient of q^e contributes at e^{-pi k x} with k = 2e
  auto add_series = [&](const qseries::QSeries& f, const Rational& scale, int pi_power, unsigned p) {
    for (const auto& [e, c] : f.terms()) {
      const Rational k = 2 * e.exact();
      if (k >= n) break;
      acc[Key{k, p, pi_power}] += scale * c;
    }
  };

  if (regime == Regime::near_infinity) {
    add_series(cat.get(FormId::PHI_0, order), -1, 0, 2);
    add_series(cat.get(FormId::PHI_M2, order), 12, -1, 1);
    add_series(cat.get(FormId::PHI_M4, order), -36, -2, 0);
    add_series(cat.get(FormId::PSI_I, order), sign * 36, -2, 0);
  } else {
    add_series(cat.get(FormId::PHI_0, order), -1, 0, 0);
    add_series(cat.get(FormId::PSI_S, order), -sign * 36, -2, 0);
  }

  ExpPolyModel model{target, regime, n, {}};
  for (const auto& [key, c] : acc) {
    if (c == 0) continue;
    model.terms.push_back({c, std::get<2>(key), std::get<1>(key), std::get<0>(key)});
  }
  return model;
}

namespace {

// Sum_{k >= m} 2 e^{2 sqrt2 pi sqrt k} e^{-pi k x}. Beyond N0 the bound
// 2 sqrt2 / sqrt k <= theta turns the tail into a geometric series in e^{-pi (x - theta)}.
Interval envelope_sum(int m, const Interval& x) {
  if (x.lo() < 0.5) {
    std::ostringstream msg;
    msg << "remainder_envelope: chart variable " << x << " below 1/2";
    throw InvalidInput(msg.str());
  }
  const double theta = x.lo() >= 1.0 ? 0.95 : 0.95 * x.lo();
  const int n0 = std::max(m, static_cast<int>(std::ceil(8.01 / (theta * theta))));
  const Interval pi = cst::pi();
  const Interval two_sqrt2_pi = Interval(2.0) * rigor::sqrt(Interval(2.0)) * pi;
  Interval acc(0.0);
  for (int k = m; k < n0; ++k) {
    const Interval kk(static_cast<double>(k));
    acc += Interval(2.0) * rigor::exp(two_sqrt2_pi * rigor::sqrt(kk) - pi * kk * x);
  }
  const Interval gap = pi * (x - Interval(theta));
  const Interval ratio = rigor::exp(-gap);
  acc += Interval(2.0) * rigor::exp(-(gap * Interval(static_cast<double>(n0)))) / (Interval(1.0) - ratio);
  return acc;
}

Interval envelope_prefactor(Regime regime, const Interval& x) {
  if (regime == Regime::near_infinity) {
    return rigor::pow(x, 2) + Interval(12.0) * cst::inv_pi() * x + Interval(36.0) * cst::inv_pi2();
  }
  return Interval(1.0) + Interval(36.0) * cst::inv_pi2() * rigor::pow(x, 2);
}

}  // namespace

Interval remainder_envelope(int m, Regime regime, const Interval& x) {
  if (m < 1) throw InvalidInput("remainder_envelope: cutoff m must be at least 1");
  return envelope_prefactor(regime, x) * envelope_sum(m, x);
}


namespace {

struct LeafCheck {
  bool ok = false;
  Interval model;
  Interval env;
  double margin = 0.0;
};

class Chart {
 public:
  Chart(Target target, Regime regime, const CertifyOptions& opt)
      : target_(target), regime_(regime), opt_(opt), model_(build_model(target, opt.n, regime)) {}

  const ExpPolyModel& model() const { return model_; }
  Regime regime() const { return regime_; }
  int max_depth() const { return opt_.max_depth; }

  LeafCheck check(double lo, double hi) const {
    LeafCheck c;
    const Interval x(lo, hi);
    c.model = model_.enclose(x);
    c.env = remainder_envelope(opt_.m, regime_, x);
    if (target_ == Target::A) {
      c.ok = c.model.hi() + c.env.hi() < 0.0;
    } else {
      c.ok = c.model.lo() > 0.0 && c.env.hi() < c.model.lo();
    }
    c.margin = c.model.mig() - c.env.hi();
    return c;
  }

  Segment segment(double lo, double hi, const LeafCheck& c) const {
    return {lo, hi, regime_, c.model.lo(), c.model.hi(), c.env.hi(), c.margin};
  }

  // Depth-first bisection; stops at the first failing leaf.
  bool dfs(double lo, double hi, int depth, std::vector<Segment>& out, std::optional<Failure>& fail) const {
    const LeafCheck c = check(lo, hi);
    if (c.ok) {
      out.push_back(segment(lo, hi, c));
      return true;
    }
    const double mid = lo + 0.5 * (hi - lo);
    if (depth >= opt_.max_depth || !(lo < mid && mid < hi)) {
      std::ostringstream os;
      os << "undecided at depth " << depth << ": model " << c.model << ", envelope <= " << c.env.hi();
      fail = Failure{regime_, lo, hi, os.str()};
      return false;
    }
    return dfs(lo, mid, depth + 1, out, fail) && dfs(mid, hi, depth + 1, out, fail);
  }

 private:
  Target target_;
  Regime regime_;
  CertifyOptions opt_;
  ExpPolyModel model_;
};

struct Node {
  double lo = 0.0, hi = 0.0;
  int depth = 0;
  bool leaf = false;
  std::vector<Segment> segments;
  std::optional<Failure> failure;
};

// Breadth-first expansion to spawn_depth, then independent depth-first subtrees on the
// worker threads. Leaves are concatenated in interval order, so the result matches dfs.
void bisect_parallel(const Chart& chart, double lo, double hi, int spawn_depth, std::vector<Segment>& out,
                     std::optional<Failure>& fail) {
  std::vector<Node> level(1);
  level[0].lo = lo;
  level[0].hi = hi;
  for (int d = 0; d < spawn_depth; ++d) {
    std::vector<Node> next;
    bool expanded = false;
    for (auto& node : level) {
      if (node.leaf) {
        next.push_back(std::move(node));
        continue;
      }
      const LeafCheck c = chart.check(node.lo, node.hi);
      const double mid = node.lo + 0.5 * (node.hi - node.lo);
      if (c.ok) {
        node.leaf = true;
        node.segments.push_back(chart.segment(node.lo, node.hi, c));
        next.push_back(std::move(node));
      } else if (node.depth >= chart.max_depth() || !(node.lo < mid && mid < node.hi)) {
        next.push_back(std::move(node));  // dfs records the failure
      } else {
        Node left, right;
        left.lo = node.lo;
        left.hi = right.lo = mid;
        right.hi = node.hi;
        left.depth = right.depth = node.depth + 1;
        next.push_back(std::move(left));
        next.push_back(std::move(right));
        expanded = true;
      }
    }
    level = std::move(next);
    if (!expanded) break;
  }

  std::vector<std::exception_ptr> errors(level.size());
  const long count = static_cast<long>(level.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    Node& node = level[static_cast<std::size_t>(i)];
    if (node.leaf) continue;
    try {
      chart.dfs(node.lo, node.hi, node.depth, node.segments, node.failure);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < level.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    const Node& node = level[i];
    out.insert(out.end(), node.segments.begin(), node.segments.end());
    if (node.failure) {
      fail = node.failure;
      return;
    }
  }
}

// Beyond x0 the model plus envelope keeps the sign of its dominant term D when
// eps(x) = sum |other terms / D| + envelope / |D| < 1. eps is a sum of c x^a e^{-b x};
// each is nonincreasing on [x0, inf) when b >= 0 and b x0 >= a, so eps(x0) < 1 suffices.
TailRecord far_tail(const ExpPolyModel& model, Target target, int m, double x0) {
  TailRecord rec;
  rec.chart = model.regime;
  rec.start = x0;
  if (model.terms.empty()) return rec;

  const ModelTerm* dom = &model.terms.front();
  for (const auto& t : model.terms) {
    if (t.sigma_over_pi < dom->sigma_over_pi ||
        (t.sigma_over_pi == dom->sigma_over_pi && t.p > dom->p)) {
      dom = &t;
    }
  }
  rec.dominant = term_text(*dom);
  const bool sign_ok = target == Target::A ? dom->coeff < 0 : dom->coeff > 0;

  const Interval X(x0);
  const Interval pi = cst::pi();
  const Interval dom_abs = rigor::abs(enclose_rational(dom->coeff) * pi_pow(dom->pi_power));

  Interval eps(0.0);
  bool monotone = true;
  // b = pi * b_over_pi; the sign test runs on the exact rational
  auto add_ratio_term = [&](const Interval& c_abs, int a, const Rational& b_over_pi) {
    Interval xa(1.0);
    for (int i = 0; i < std::abs(a); ++i) xa = a > 0 ? xa * X : xa / X;
    const Interval b = pi * enclose_rational(b_over_pi);
    eps += c_abs / dom_abs * xa * rigor::exp(-(b * X));
    if (b_over_pi < 0 || (a > 0 && (b_over_pi == 0 || b.lo() * x0 < static_cast<double>(a)))) {
      monotone = false;
    }
  };

  for (const auto& t : model.terms) {
    if (&t == dom) continue;
    const Interval c_abs = rigor::abs(enclose_rational(t.coeff) * pi_pow(t.pi_power));
    add_ratio_term(c_abs, static_cast<int>(t.p) - static_cast<int>(dom->p),
                   t.sigma_over_pi - dom->sigma_over_pi);
  }

  // envelope(x) <= prefactor(x) * S(x0) e^{pi m x0} e^{-pi m x}
  const Interval pim = pi * Interval(static_cast<double>(m));
  const Interval scale = envelope_sum(m, X) * rigor::exp(pim * X);
  const Rational b_env = Rational(m) - dom->sigma_over_pi;
  const int p_dom = static_cast<int>(dom->p);
  if (model.regime == Regime::near_infinity) {
    add_ratio_term(scale, 2 - p_dom, b_env);
    add_ratio_term(scale * Interval(12.0) * cst::inv_pi(), 1 - p_dom, b_env);
    add_ratio_term(scale * Interval(36.0) * cst::inv_pi2(), -p_dom, b_env);
  } else {
    add_ratio_term(scale, -p_dom, b_env);
    add_ratio_term(scale * Interval(36.0) * cst::inv_pi2(), 2 - p_dom, b_env);
  }

  rec.epsilon_bound = eps.hi();
  rec.monotone = monotone;
  rec.pass = sign_ok && monotone && eps.hi() < 1.0;
  return rec;
}

std::vector<std::string> coefficient_hypotheses() {
  std::vector<std::string> out;
  for (FormId id : {FormId::PSI_I, FormId::PSI_S, FormId::PHI_0, FormId::PHI_M2, FormId::PHI_M4}) {
    const auto& fi = modforms::info(id);
    const auto rep = modforms::coefficient_bound_check(id, modforms::kDefaultOrder - 1);
    std::ostringstream os;
    os << fi.bound_text << (rep.pass ? " (verified for n <= " : " (VIOLATED below n = ")
       << modforms::kDefaultOrder - 1 << ", assumed beyond)";
    out.push_back(os.str());
  }
  return out;
}

}  // namespace

Certificate certify_sign(Target target, const CertifyOptions& options) {
  if (options.n < 1 || options.m < 1) throw InvalidInput("certify: n and m must be at least 1");
  if (!(options.t_star >= 2.0) || !(options.u_star >= 2.0)) {
    throw InvalidInput("certify: T* and U* must be at least 2");
  }
  if (options.max_depth < 0 || options.max_depth > 200) throw InvalidInput("certify: max_depth out of range");

  Certificate cert;
  cert.target = target;
  cert.options = options;
  cert.hypotheses = coefficient_hypotheses();
  cert.certified = true;

  for (Regime regime : {Regime::near_infinity, Regime::near_zero}) {
    const Chart chart(target, regime, options);
    const double x_star = regime == Regime::near_infinity ? options.t_star : options.u_star;
    std::optional<Failure> fail;
    if (options.parallel) {
      bisect_parallel(chart, 1.0, x_star, options.spawn_depth, cert.segments, fail);
    } else {
      chart.dfs(1.0, x_star, 0, cert.segments, fail);
    }
    if (fail) {
      cert.certified = false;
      cert.failure = fail;
      break;
    }
    TailRecord tail = far_tail(chart.model(), target, options.m, x_star);
    cert.tails.push_back(tail);
    if (!tail.pass) {
      cert.certified = false;
      cert.failure = Failure{regime, x_star, std::numeric_limits<double>::infinity(),
                             "far-tail argument failed: eps bound " + std::to_string(tail.epsilon_bound) +
                                 (tail.monotone ? "" : ", a term of eps is not monotone")};
      break;
    }
  }

  if (!cert.segments.empty()) {
    const auto it = std::min_element(cert.segments.begin(), cert.segments.end(),
                                     [](const Segment& a, const Segment& b) { return a.margin < b.margin; });
    cert.min_margin = it->margin;
    const double mid = it->lo + 0.5 * (it->hi - it->lo);
    const ExpPolyModel model = build_model(target, options.n, it->chart);
    cert.min_margin_width = model.enclose(Interval(mid)).width();
    if (cert.certified && !(cert.min_margin > 10.0 * cert.min_margin_width)) {
      cert.certified = false;
      cert.failure = Failure{it->chart, it->lo, it->hi, "minimal margin within 10x of the rounding width"};
    }
  }
  return cert;
}

nlohmann::json to_json(const Certificate& cert) {
  using nlohmann::json;
  json segs = json::array();
  for (const auto& s : cert.segments) {
    segs.push_back({{"lo", s.lo},
                    {"hi", s.hi},
                    {"chart", to_string(s.chart)},
                    {"model_lo", s.model_lo},
                    {"model_hi", s.model_hi},
                    {"env_hi", s.env_hi},
                    {"margin", s.margin}});
  }
  json tails = json::array();
  for (const auto& t : cert.tails) {
    tails.push_back({{"chart", to_string(t.chart)},
                     {"t_star_value", t.start},
                     {"dominant", t.dominant},
                     {"epsilon_bound", t.epsilon_bound},
                     {"monotone", t.monotone},
                     {"pass", t.pass}});
  }
  json status;
  if (cert.certified) {
    status = "certified";
  } else if (cert.failure) {
    const auto& f = *cert.failure;
    status = {{"failed", {{"chart", to_string(f.chart)},
                          {"lo", f.lo},
                          {"hi", std::isinf(f.hi) ? json("inf") : json(f.hi)},
                          {"reason", f.reason}}}};
  } else {
    status = "failed";
  }
  return {{"target", to_string(cert.target)},
          {"parameters",
           {{"n", cert.options.n},
            {"m", cert.options.m},
            {"T_star", cert.options.t_star},
            {"U_star", cert.options.u_star},
            {"max_depth", cert.options.max_depth}}},
          {"hypotheses", cert.hypotheses},
          {"segments", segs},
          {"tail", tails},
          {"min_margin", cert.min_margin},
          {"min_margin_width", cert.min_margin_width},
          {"status", status}};
}

PointValue evaluate(Target target, double t, int n) {
  if (!(t > 0.0)) throw InvalidInput("evaluate: t must be positive");
  const Regime regime = t >= 1.0 ? Regime::near_infinity : Regime::near_zero;
  const double x = t >= 1.0 ? t : 1.0 / t;
  static std::mutex mutex;
  static std::map<std::tuple<Target, int, Regime>, ExpPolyModel> models;
  ExpPolyModel model;
  {
    std::lock_guard lock(mutex);
    auto key = std::make_tuple(target, n, regime);
    auto it = models.find(key);
    if (it == models.end()) it = models.emplace(key, build_model(target, n, regime)).first;
    model = it->second;
  }
  const double env = remainder_envelope(n, regime, Interval(x)).hi();
  const double scale = regime == Regime::near_zero ? t * t : 1.0;
  return {scale * model.value(x), scale * env};
}

}  // namespace e8magic::certify
