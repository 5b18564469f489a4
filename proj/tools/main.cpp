#include <vector>

#include "cipherpipe/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cipherpipe::run_cli(args);
}
