#pragma once

// Command-line front end.
//
// Subcommands: build (assemble + export matrices), verify (named check
// suites), sweep (convergence metrics over levels), kernel (Cauchy-kernel
// checks), state (coherent / random-state moment checks), spectrum (gap and
// resolvent diagnostics).
//
// Exit contract: 0 every check passed, 1 a check failed or a computation
// error surfaced, 2 usage or configuration errors.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mml/core.hpp"

namespace mml::cli {

enum class Command { Build, Verify, Sweep, Kernel, State, Spectrum };
enum class Format { Json, Csv, Text };

struct RunConfig {
  Command command = Command::Verify;
  std::vector<int> n_list;                      // levels to process
  std::string suite = "all";                    // verify only
  std::map<std::string, double> tol_overrides;  // check name -> replacement
  cplx alpha{1.0, 0.0};                         // coherent-state parameter
  cplx z{0.0, 1.0};                             // resolvent shift
  double half_width = 1.0;                      // gap window [-a, a]
  Format format = Format::Text;
  std::string out_path;  // report file; for build, the export directory
  std::uint64_t seed = 12345;
  bool no_timestamp = false;  // drop timestamp, zero runtimes (reproducible bytes)
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace mml::cli
