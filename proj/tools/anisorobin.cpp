#include "anisorobin/cli.hpp"

int main(int argc, char** argv) { return anisorobin::cli_main(argc, argv); }
