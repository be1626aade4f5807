#include <iostream>
#include <string>
#include <vector>

#include "shmv/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return shmv::run_cli(args, std::cout, std::cerr);
}
