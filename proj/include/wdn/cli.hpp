#pragma once

#include "wdn/fixed_point.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wdn::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kNotConverged = 2,
    kNotContraction = 3,
};

/// Runs a command line (without the program name) and returns the exit code.
///
///   solve FILE   [--tol-gpm X] [--max-iter N] [--init-gpm X|@FILE]
///                [--method fp|newton] [--trace PATH] [--out PATH] [--analyze]
///   analyze FILE [--solution PATH] [--tol-gpm X] [--max-iter N]
///                [--init-gpm X|@FILE] [--out PATH]
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Header `iter,step_inf_gpm,ratio`, LF endings, ratio blank for k = 1.
std::string format_trace_csv(const std::vector<TraceRecord>& trace);

}  // namespace wdn::cli
