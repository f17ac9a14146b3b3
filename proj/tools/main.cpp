#include "shannon_markov/cli.hpp"

int main(int argc, char** argv) {
    return shannon_markov::main_entry(argc, argv);
}
