#include <iostream>
#include <string>
#include <vector>

#include "truncvote/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto r = truncvote::cli::run_command(args);
    std::cout << r.out;
    std::cerr << r.err;
    return r.exit_code;
}
