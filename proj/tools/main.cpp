#include <iostream>
#include <string>
#include <vector>

#include "molsec/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return molsec::cli::run(args, std::cout, std::cerr);
}
