#include <iostream>
#include <string>
#include <vector>

#include "latticeplan/cli.h"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return latticeplan::run_cli(args, std::cout, std::cerr);
}
