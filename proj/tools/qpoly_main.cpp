#include <iostream>

#include "qpoly/cli.hpp"

int main(int argc, char** argv) {
    return qpoly::run_cli(argc, argv, std::cout, std::cerr);
}
