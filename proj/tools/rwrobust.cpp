#include "rwrobust/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return rwr::cli::run(argc, argv, std::cout, std::cerr);
}
