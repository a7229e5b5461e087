#include <iostream>

#include "latwave/cli.hpp"

int main(int argc, char** argv)
{
    return latwave::cli::run(argc, argv, std::cout, std::cerr);
}
