#include "hpez/cli.hpp"

int main(int argc, char **argv) { return hpez::cli::run(argc, argv); }
