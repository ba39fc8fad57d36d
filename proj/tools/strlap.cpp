#include <iostream>

#include "strlap/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return strlap::cli::run(args, std::cout, std::cerr);
}
