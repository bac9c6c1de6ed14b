#include <string>
#include <vector>

#include "tsclust/cli.hpp"

int main(int argc, char** argv) {
    return tsclust::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
