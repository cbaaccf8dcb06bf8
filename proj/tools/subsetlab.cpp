#include <iostream>
#include <string>
#include <vector>

#include "subsetlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return subsetlab::cli::run(std::move(args), std::cout, std::cerr);
}
