#include <iostream>

#include "characteristica/cli.hpp"

int main(int argc, char** argv) {
    return characteristica::run_cli(argc, argv, std::cout, std::cerr);
}
