#include <iostream>
#include <string>
#include <vector>

#include "maxsub_cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return maxsub::cli::run(args, std::cout, std::cerr);
}
