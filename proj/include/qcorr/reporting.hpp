#pragma once

#include "qcorr/polygamy.hpp"
#include "qcorr/state_io.hpp"

namespace qcorr {

// One CLI invocation, parsed. Which fields matter depends on the command;
// unused ones are ignored.
struct RunSpec {
  std::string command;
  std::string state;  // named descriptor or file path
  double q = 1.0;
  double q_min = 1.0;  // sweep grid
  double q_max = 2.0;
  int steps = 0;
  OptimizerConfig optimizer;
  std::vector<std::string> a_side;    // decomposition cut, default first party
  std::vector<std::string> measured;  // measured parties, default all but first
  std::string sweep_command;
  int ghz_n = 4;
  bool allow_large = false;
  std::string out_path;  // JSON report file; empty = stdout only
  std::string csv_path;  // sweep CSV file
};

struct RunResult {
  int exit_code = 0;        // 0 ok, 2 inconclusive verdicts (1 = thrown error)
  std::string report_json;  // always set
  std::string csv;          // sweep only
};

// Executes the command, writes out_path / csv_path when set, and returns
// the emitted artifacts. Precondition violations throw with a message
// naming the violated requirement; the CLI maps those to exit 1.
RunResult run_command(const RunSpec& spec);

// Every float a report emits goes through a 9-significant-digit round-trip
// so repeated runs diff cleanly.
double report_round(double v);
std::string format_double(double v);

}  // namespace qcorr
