#include <string>
#include <vector>

#include "lcade/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lcade::cli::run(std::move(args));
}
