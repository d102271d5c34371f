#include <iostream>
#include <string>
#include <vector>

#include "driftbandit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return driftbandit::cli::main(args, std::cout, std::cerr);
}
