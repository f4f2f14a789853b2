#include "thetalab/cli.hpp"

int main(int argc, char** argv) { return thetalab::cli_main(argc, argv); }
