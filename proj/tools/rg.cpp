#include <iostream>

#include "rgraph/cli.hpp"

int main(int argc, char** argv) {
    return rgraph::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
