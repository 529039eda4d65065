#include "mml/cli.hpp"

int main(int argc, char** argv) {
    return mml::cli_main(argc, argv);
}
