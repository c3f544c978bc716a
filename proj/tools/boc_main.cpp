#include <iostream>

#include "bagcoins/cli.hpp"

int main(int argc, char** argv) {
    try {
        return bagcoins::cli::run(argc, argv, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "boc: internal error: " << e.what() << '\n';
        return 1;
    }
}
