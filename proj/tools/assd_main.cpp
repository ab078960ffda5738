#include "assd/cli.hpp"

int main(int argc, char** argv) { return assd::cli_main(argc, argv); }
