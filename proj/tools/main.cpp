#include <iostream>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gtlc::cli::cli_main(std::move(args), std::cout, std::cerr);
}
