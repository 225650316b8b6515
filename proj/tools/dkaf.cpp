#include <iostream>
#include <string>
#include <vector>

#include "dkaf/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dkaf::cli::main(args, std::cout, std::cerr);
}
