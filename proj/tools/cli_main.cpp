#include "scf/cli.hpp"

int main(int argc, char** argv) { return scf::cli_main(argc, argv); }
