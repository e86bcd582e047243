#include <iostream>

#include "ifatune/cli.hpp"

int main(int argc, char** argv) {
    return ifatune::cli::run(argc, argv, std::cout, std::cerr);
}
