// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace intentops::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidData = 1,
    kUsage = 2,
    kUnschedulable = 3,
    kFailure = 4,
};

/// The `intentops` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace intentops::cli
