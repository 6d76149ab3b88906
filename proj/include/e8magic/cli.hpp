#pragma once

// Command-line front end: option parsing and verb dispatch.

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace e8magic::cli {

enum ExitCode : int {
  kOk = 0,
  kCertificationFailed = 1,
  kInvalidInput = 2,
  kNumericalFailure = 3,
  kIoError = 4,
};

struct SeriesCmd {
  std::string form;
  int order = 64;
  std::string format = "json";
  std::optional<std::string> out;
  /// Series document to install into the cache instead of building one.
  std::optional<std::string> import_file;
};

struct CertifyCmd {
  std::string target;
  int n = 6;
  std::optional<int> m;
  double t_star = 4.0;
  std::optional<double> u_star;
  int max_depth = 60;
  bool serial = false;
  std::optional<std::string> out;
};

struct EvalCmd {
  std::string function;
  double r = 0.0;
  bool deriv = false;
};

struct PlotCmd {
  std::string function;
  double lo = 0.0;
  double hi = 0.0;
  int samples = 0;
  std::optional<std::string> out;
};

struct LatticeCmd {
  int max_norm = 40;
  bool shells = false;
  std::vector<double> poisson;
};

struct BoundCmd {};
struct SelfcheckCmd {};

struct CommandSpec {
  std::variant<SeriesCmd, CertifyCmd, EvalCmd, PlotCmd, LatticeCmd, BoundCmd, SelfcheckCmd> verb;
  std::optional<int> threads;
};

/// Executes one validated command. Exceptions are mapped onto exit codes:
/// InvalidInput -> 2, NumericalFailure -> 3, IoError -> 4.
int run_command(const CommandSpec& spec, std::ostream& out, std::ostream& err);

/// Parses argv (usage errors print help to err and return 2) and runs the command.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace e8magic::cli
