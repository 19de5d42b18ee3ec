#include <iostream>
#include <string>
#include <vector>

#include "oppnet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return oppnet::cli::run(args, std::cout, std::cerr);
}
