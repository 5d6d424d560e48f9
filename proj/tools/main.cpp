#include <iostream>
#include <string>
#include <vector>

#include "inoc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return inoc::run_cli(args, std::cout, std::cerr);
}
