#include "e8magic/cli.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "e8magic/certify.hpp"
#include "e8magic/e8.hpp"
#include "e8magic/error.hpp"
#include "e8magic/modforms.hpp"
#include "e8magic/radial.hpp"
#include "e8magic/series_io.hpp"

namespace e8magic::cli {

namespace {

using modforms::FormId;
using qseries::Exponent8;

// Forms read by certify and radial at the default order.
constexpr FormId kPipelineForms[] = {FormId::PHI_0, FormId::PHI_M2, FormId::PHI_M4, FormId::PSI_I, FormId::PSI_S};

void preload_pipeline() {
  for (FormId id : kPipelineForms) series_io::load_or_build(id, modforms::kDefaultOrder);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw IoError("write failed for " + path);
}

// shortest round-trip representation
std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

radial::Fn parse_fn(const std::string& s) {
  if (s == "a") return radial::Fn::a;
  if (s == "b") return radial::Fn::b;
  if (s == "g") return radial::Fn::g;
  if (s == "ghat") return radial::Fn::ghat;
  throw InvalidInput("unknown function '" + s + "' (expected a, b, g or ghat)");
}

certify::Target parse_target(const std::string& s) {
  if (s == "A") return certify::Target::A;
  if (s == "B") return certify::Target::B;
  throw InvalidInput("unknown target '" + s + "' (expected A or B)");
}

int run(const SeriesCmd& c, std::ostream& out) {
  auto id = modforms::parse_form_id(c.form);
  if (!id) throw InvalidInput("unknown form '" + c.form + "'");
  if (c.order < 1) throw InvalidInput("order must be positive");
  if (c.format != "json" && c.format != "text") throw InvalidInput("format must be json or text");
  const auto& fi = modforms::info(*id);
  if (c.import_file) {
    std::ifstream in(*c.import_file);
    if (!in) throw IoError("cannot read " + *c.import_file);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      throw IoError(*c.import_file + " is not JSON: " + e.what());
    }
    auto named = series_io::from_json(doc);
    if (named.name != fi.name) throw InvalidInput("document holds " + named.name + ", not " + std::string(fi.name));
    if (named.series.order() < Exponent8::integer(c.order))
      throw InvalidInput("document does not reach order " + std::to_string(c.order));
    series_io::write_cache(*id, c.order, named.series.truncated(Exponent8::integer(c.order)));
  }
  const auto& s = series_io::load_or_build(*id, c.order);
  series_io::NamedSeries named{std::string(fi.name), fi.weight, s};
  std::string text;
  if (c.format == "json") {
    auto doc = series_io::to_json(named);
    doc["options"] = {{"form", fi.name}, {"order", c.order}};
    text = doc.dump(1) + "\n";
  } else {
    text = "# series --form " + std::string(fi.name) + " --order " + std::to_string(c.order) + "\n" +
           series_io::to_text(named);
  }
  if (c.out)
    write_file(*c.out, text);
  else
    out << text;
  return kOk;
}

int run(const CertifyCmd& c, std::ostream& out) {
  certify::CertifyOptions opt;
  opt.n = c.n;
  opt.m = c.m.value_or(c.n);
  opt.t_star = c.t_star;
  opt.u_star = c.u_star.value_or(c.t_star);
  opt.max_depth = c.max_depth;
  opt.parallel = !c.serial;
  if (opt.n < 1 || opt.m < 1) throw InvalidInput("n and m must be positive");
  if (!(opt.t_star > 1.0) || !(opt.u_star > 1.0)) throw InvalidInput("tstar and ustar must exceed 1");
  if (opt.max_depth < 1) throw InvalidInput("max-depth must be positive");
  const auto target = parse_target(c.target);
  preload_pipeline();
  auto cert = certify::certify_sign(target, opt);
  auto doc = certify::to_json(cert);
  if (c.out) {
    write_file(*c.out, doc.dump(1) + "\n");
    out << "target " << c.target << ": " << (cert.certified ? "certified" : "FAILED") << ", "
        << cert.segments.size() << " segments, min margin " << fmt(cert.min_margin) << " -> " << *c.out << "\n";
    if (cert.failure)
      out << "failure on chart " << certify::to_string(cert.failure->chart) << " [" << fmt(cert.failure->lo) << ", "
          << fmt(cert.failure->hi) << "]: " << cert.failure->reason << "\n";
  } else {
    out << doc.dump(1) << "\n";
  }
  return cert.certified ? kOk : kCertificationFailed;
}

int run(const EvalCmd& c, std::ostream& out) {
  const auto fn = parse_fn(c.function);
  if (!(c.r >= 0.0) || !std::isfinite(c.r)) throw InvalidInput("r must be a non-negative number");
  auto v = c.deriv ? radial::eval_deriv(fn, c.r) : radial::eval(fn, c.r);
  const bool imaginary = fn == radial::Fn::a || fn == radial::Fn::b;
  out << "function " << c.function << (c.deriv ? "'" : "") << " r " << fmt(c.r) << "\n"
      << (imaginary ? "imag " : "value ") << fmt(v.value) << "\nerr " << fmt(v.err) << "\n";
  return kOk;
}

int run(const PlotCmd& c, std::ostream& out) {
  if (c.samples < 2) throw InvalidInput("samples must be at least 2");
  if (!(c.hi > c.lo)) throw InvalidInput("range must satisfy lo < hi");
  const bool is_model = c.function == "A" || c.function == "B";
  if (is_model) {
    if (!(c.lo > 0.0)) throw InvalidInput("A and B are plotted for t > 0");
  } else {
    if (c.function != "g" && c.function != "ghat") throw InvalidInput("plot function must be g, ghat, A or B");
    if (c.lo < 0.0) throw InvalidInput("radial plots need r >= 0");
  }
  if (is_model) preload_pipeline();
  std::ostringstream csv;
  csv << "# plot --function " << c.function << " --range " << fmt(c.lo) << ":" << fmt(c.hi) << " --samples "
      << c.samples << "\n"
      << (is_model ? "t" : "r") << ",value,err\n";
  std::vector<std::pair<double, double>> rows(c.samples);
  const int n = c.samples;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    double x = c.lo + (c.hi - c.lo) * i / (n - 1);
    if (is_model) {
      auto v = certify::evaluate(parse_target(c.function), x);
      rows[i] = {v.value, v.err};
    } else {
      auto v = radial::eval_g(x, parse_fn(c.function));
      rows[i] = {v.value, v.err};
    }
  }
  for (int i = 0; i < n; ++i)
    csv << fmt(c.lo + (c.hi - c.lo) * i / (n - 1)) << "," << fmt(rows[i].first) << "," << fmt(rows[i].second) << "\n";
  if (c.out) {
    write_file(*c.out, csv.str());
    out << n << " samples -> " << *c.out << "\n";
  } else {
    out << csv.str();
  }
  return kOk;
}

int run(const LatticeCmd& c, std::ostream& out) {
  auto shells = e8::enumerate_shells(c.max_norm);
  const auto& e4 = modforms::catalog().get(FormId::E4, c.max_norm / 2 + 1);
  bool consistent = true;
  std::uint64_t total = 0;
  for (const auto& [norm, count] : shells.counts) {
    total += count;
    if (norm == 0) continue;
    if (qseries::Rational(static_cast<unsigned long>(count)) != e4.coeff(Exponent8::integer(norm / 2)))
      consistent = false;
  }
  out << "lattice vectors with |x|^2 <= " << c.max_norm << ": " << total << "\n"
      << "shell counts equal the E4 coefficients 240 sigma_3(n): " << (consistent ? "yes" : "NO") << "\n";
  if (c.shells)
    for (const auto& [norm, count] : shells.counts) out << "N(" << norm << ") = " << count << "\n";
  bool ok = consistent;
  for (double alpha : c.poisson) {
    auto rep = e8::poisson_check(alpha, shells);
    out << "poisson alpha " << fmt(alpha) << "\n"
        << "  self-dual: lhs " << fmt(rep.self_dual.lhs) << " rhs " << fmt(rep.self_dual.rhs) << " discrepancy "
        << fmt(rep.self_dual.discrepancy) << " tails " << fmt(rep.self_dual.lhs_tail) << " "
        << fmt(rep.self_dual.rhs_tail) << "\n"
        << "  scaled 2^4: lhs " << fmt(rep.scaled.lhs) << " rhs " << fmt(rep.scaled.rhs) << " discrepancy "
        << fmt(rep.scaled.discrepancy) << " tails " << fmt(rep.scaled.lhs_tail) << " " << fmt(rep.scaled.rhs_tail)
        << "\n"
        << "  magic function: sum g " << fmt(rep.g_side) << " +- " << fmt(rep.g_err) << ", sum ghat "
        << fmt(rep.ghat_side) << " +- " << fmt(rep.ghat_err) << "\n"
        << "  " << (rep.pass ? "PASS" : "FAIL") << "\n";
    ok = ok && rep.pass;
  }
  return ok ? kOk : kNumericalFailure;
}

int run(const BoundCmd&, std::ostream& out) {
  auto d = e8::density_bound();
  out << "ratio f(0)/fhat(0) = 2^4 g(0)/ghat(0) = " << fmt(d.ratio) << " +- " << fmt(d.ratio_err)
      << "   [g(0) = " << fmt(d.g0) << ", ghat(0) = " << fmt(d.ghat0) << ", f(x) = g(sqrt2 x)]\n"
      << "volume Vol B_8(0, 1/2) = pi^4/6144 = " << fmt(d.ball_volume) << "   [pi^{d/2} r^d / Gamma(d/2 + 1)]\n"
      << "bound = ratio * volume = " << fmt(d.bound) << " +- " << fmt(d.bound_err)
      << "   [Cohn-Elkies linear programming bound]\n"
      << "pi^4/384 = " << fmt(d.target) << "   " << (d.matches ? "match" : "MISMATCH") << "\n";
  return d.matches ? kOk : kNumericalFailure;
}

struct Golden {
  FormId id;
  std::int64_t eighths;
  long long value;
};

// printed expansions of the catalog forms
const Golden kGolden[] = {
    {FormId::PHI_M4, -8, 1},          {FormId::PHI_M4, 0, 504},         {FormId::PHI_M4, 8, 73764},
    {FormId::PHI_M4, 16, 2695040},    {FormId::PHI_M4, 24, 54755730},   {FormId::PHI_M2, 0, 720},
    {FormId::PHI_M2, 8, 203040},      {FormId::PHI_M2, 16, 9417600},    {FormId::PHI_M2, 24, 223473600},
    {FormId::PHI_M2, 32, 3566782080}, {FormId::PHI_0, 8, 518400},       {FormId::PHI_0, 16, 31104000},
    {FormId::PHI_0, 24, 870912000},   {FormId::PHI_0, 32, 15697152000}, {FormId::H, -8, 1},
    {FormId::H, 0, 16},               {FormId::H, 8, -132},             {FormId::H, 16, 640},
    {FormId::H, 24, -2550},           {FormId::PSI_I, -8, 1},           {FormId::PSI_I, 0, 144},
    {FormId::PSI_I, 4, -5120},        {FormId::PSI_I, 8, 70524},        {FormId::PSI_I, 12, -626688},
    {FormId::PSI_I, 16, 4265600},     {FormId::PSI_T, -8, 1},           {FormId::PSI_T, 0, 144},
    {FormId::PSI_T, 4, 5120},         {FormId::PSI_T, 8, 70524},        {FormId::PSI_T, 12, 626688},
    {FormId::PSI_T, 16, 4265600},     {FormId::PSI_S, 4, -10240},       {FormId::PSI_S, 12, -1253376},
    {FormId::PSI_S, 20, -48328704},   {FormId::PSI_S, 28, -1059078144}, {FormId::J, -8, 1},
    {FormId::J, 0, 744},              {FormId::J, 8, 196884},           {FormId::J, 16, 21493760},
    {FormId::J, 24, 864299970},       {FormId::J, 32, 20245856256},
};

int run(const SelfcheckCmd&, std::ostream& out) {
  bool all = true;
  auto line = [&](const std::string& what, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << what << "\n";
    all = all && ok;
  };

  preload_pipeline();
  int bad = 0;
  for (const auto& g : kGolden) {
    const auto& s = series_io::load_or_build(g.id, modforms::kDefaultOrder);
    if (s.coeff(Exponent8(g.eighths)) != qseries::Rational(std::to_string(g.value))) ++bad;
  }
  line("golden expansions (" + std::to_string(std::size(kGolden)) + " coefficients, " + std::to_string(bad) +
           " mismatches)",
       bad == 0);

  for (auto target : {certify::Target::A, certify::Target::B}) {
    auto cert = certify::certify_sign(target);
    std::ostringstream what;
    what << "certificate " << certify::to_string(target) << " (" << cert.segments.size() << " segments, min margin "
         << fmt(cert.min_margin) << ")";
    line(what.str(), cert.certified && cert.min_margin > 0.0);
  }

  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    double r = std::sqrt(2.0 * n);
    worst = std::max({worst, std::abs(radial::eval_g(r, radial::Fn::g).value),
                      std::abs(radial::eval_g(r, radial::Fn::ghat).value)});
  }
  line("zero ladder |g|, |ghat| at sqrt(2n), n = 1..6: max " + fmt(worst), worst < 1e-8);

  out << (all ? "PASS" : "FAIL") << "\n";
  return all ? kOk : kCertificationFailed;
}

}  // namespace

int run_command(const CommandSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    if (spec.threads) {
      if (*spec.threads < 1) throw InvalidInput("--threads must be positive");
      omp_set_num_threads(*spec.threads);
    }
    return std::visit([&](const auto& c) { return run(c, out); }, spec.verb);
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"e8magic: modular forms, sign certificates and the magic function for E8", "e8magic"};
  app.require_subcommand(1);
  int threads = 0;
  auto* threads_opt = app.add_option("--threads", threads, "OpenMP worker threads")->check(CLI::PositiveNumber);

  SeriesCmd series;
  auto* s = app.add_subcommand("series", "Print or cache the q-expansion of a catalog form");
  s->add_option("--form", series.form, "Form name (E4, PHI_0, PSI_S, ...)")->required();
  s->add_option("--order", series.order, "Exclusive integer exponent bound");
  s->add_option("--format", series.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  s->add_option("--out", series.out, "Output file");
  s->add_option("--import", series.import_file, "Series document to install into the cache");

  CertifyCmd cert;
  auto* c = app.add_subcommand("certify", "Certify A(t) < 0 or B(t) > 0 on (0, inf)");
  c->add_option("--target", cert.target, "A or B")->required()->check(CLI::IsMember({"A", "B"}));
  c->add_option("--n", cert.n, "Model cutoff");
  c->add_option("--m", cert.m, "Envelope cutoff (default: n)");
  c->add_option("--tstar", cert.t_star, "Bisection end on the t chart");
  c->add_option("--ustar", cert.u_star, "Bisection end on the u = 1/t chart (default: tstar)");
  c->add_option("--max-depth", cert.max_depth, "Bisection depth limit");
  c->add_flag("--serial", cert.serial, "Disable the parallel bisection");
  c->add_option("--out", cert.out, "Certificate JSON file");

  EvalCmd ev;
  auto* e = app.add_subcommand("eval", "Evaluate a, b (imaginary parts), g or ghat at radius r");
  e->add_option("--function", ev.function, "a, b, g or ghat")->required()->check(CLI::IsMember({"a", "b", "g", "ghat"}));
  e->add_option("--r", ev.r, "Radius")->required();
  e->add_flag("--deriv", ev.deriv, "Radial derivative instead of the value");

  PlotCmd plot;
  std::string range;
  auto* p = app.add_subcommand("plot", "Sample g, ghat, A or B into CSV (x, value, err)");
  p->add_option("--function", plot.function, "g, ghat, A or B")->required()->check(CLI::IsMember({"g", "ghat", "A", "B"}));
  p->add_option("--range", range, "lo:hi")->required();
  p->add_option("--samples", plot.samples, "Number of samples")->required();
  p->add_option("--out", plot.out, "CSV file");

  LatticeCmd lat;
  auto* l = app.add_subcommand("lattice", "Enumerate E8 shells and run Poisson checks");
  l->add_option("--max-norm", lat.max_norm, "Even bound on |x|^2");
  l->add_flag("--shells", lat.shells, "Print every shell count");
  l->add_option("--poisson", lat.poisson, "Gaussian parameter alpha (repeatable)");

  app.add_subcommand("bound", "Print the density bound delivered by the magic function");
  app.add_subcommand("selfcheck", "Golden expansions, both certificates and the zero ladder");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kInvalidInput;
  }

  CommandSpec spec;
  if (threads_opt->count() > 0) spec.threads = threads;
  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "series") {
    spec.verb = series;
  } else if (name == "certify") {
    spec.verb = cert;
  } else if (name == "eval") {
    spec.verb = ev;
  } else if (name == "plot") {
    auto colon = range.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
      std::size_t used = 0;
      plot.lo = std::stod(range.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("trailing text");
      const std::string hi = range.substr(colon + 1);
      plot.hi = std::stod(hi, &used);
      if (used != hi.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      err << "--range expects lo:hi, got '" << range << "'\n" << sub->help();
      return kInvalidInput;
    }
    spec.verb = plot;
  } else if (name == "lattice") {
    spec.verb = lat;
  } else if (name == "bound") {
    spec.verb = BoundCmd{};
  } else {
    spec.verb = SelfcheckCmd{};
  }
  return run_command(spec, out, err);
}

}  // namespace e8magic::cli
