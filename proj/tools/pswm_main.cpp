#include <iostream>

#include "pswm/cli.hpp"

int main(int argc, char** argv) {
    return pswm::cli::run(argc, argv, std::cout, std::cerr);
}
