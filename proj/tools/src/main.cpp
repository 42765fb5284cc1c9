#include <iostream>

#include "hetsynth/cli.hpp"

int main(int argc, char** argv)
{
    return hetsynth::cli_main(argc, argv, std::cout, std::cerr);
}
