#include <iostream>
#include <string>
#include <vector>

#include "dipolarqc/sweep.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return dqc::run_cli(args, std::cout, std::cerr);
}
