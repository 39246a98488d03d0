#include "grating/cli.hpp"

int main(int argc, char** argv) { return grating::cli_main(argc, argv); }
