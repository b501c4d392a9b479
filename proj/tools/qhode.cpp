// qhode — meromorphic-solution analysis of quasi-homogeneous ODE systems.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#include <iostream>
#include <string>
#include <vector>

#include "qhode/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qhode::cli_main(args, std::cout, std::cerr);
}
