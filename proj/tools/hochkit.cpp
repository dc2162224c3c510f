#include <iostream>
#include <string>
#include <vector>

#include "hochkit/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return hochkit::cli::run(args, std::cout, std::cerr);
}
