#include "hfv/cli.hpp"

int main(int argc, char** argv) { return hfv::cli_main(argc, argv); }
