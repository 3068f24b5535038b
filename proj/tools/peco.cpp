#include "peco/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return peco::run_cli(argc, argv, std::cout, std::cerr);
}
