#include "bssn/cli.hpp"

int main(int argc, char** argv) { return bssn::cli_main(argc, argv); }
