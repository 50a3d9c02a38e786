#include "topdc/cli.hpp"

int main(int argc, char** argv) { return topdc::cli_main(argc, argv); }
