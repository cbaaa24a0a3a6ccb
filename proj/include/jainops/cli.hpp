#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jainops::cli {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kSuccess = 0,
  kPropertyViolated = 1,
  kConfigError = 2,
  kNumericCapError = 3,
};

/// Runs `jainlab <args...>`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "poly:c0,c1,...", "piecewise:bp|c0,c1;bp|..." into coefficient data,
/// Throws DomainError on malformed input.
struct InlineFunction {
  bool piecewise = false;
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> coefficients;
};
InlineFunction parse_inline_function(const std::string& text);

/// "a,b,c" or "start:stop:count[:linear|log]".
std::vector<double> parse_grid(const std::string& text);

}  // namespace jainops::cli
