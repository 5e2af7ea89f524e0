#include "mslab/cli.hpp"

int main(int argc, char** argv) { return mslab::cli_main(argc, argv); }
