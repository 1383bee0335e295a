#include "cli.hpp"

int main(int argc, char** argv) {
    return ropacity::cli::main(argc, argv, std::cout, std::cerr);
}
