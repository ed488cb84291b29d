#include "nilmeval/cli.hpp"

int main(int argc, char** argv) {
    return nilmeval::run_cli(argc, argv);
}
