#include <iostream>
#include <string>
#include <vector>

#include "edgerm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return edgerm::cli::dispatch(args, std::cout, std::cerr);
}
