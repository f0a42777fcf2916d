#include <iostream>

#include "adme/cli/cli.hpp"

int main(int argc, char** argv) {
    return adme::cli::main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
