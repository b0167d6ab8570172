// SPDX-License-Identifier: Apache-2.0
#include "intentops/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return intentops::cli::run_cli(args, std::cin, std::cout, std::cerr);
}
