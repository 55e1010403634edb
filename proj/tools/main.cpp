#include <iostream>

#include "radclust/pipeline/cli.hpp"

int main(int argc, char** argv) {
    return radclust::pipeline::cli_main(argc, argv, std::cout, std::cerr);
}
