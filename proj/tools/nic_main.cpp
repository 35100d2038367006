#include "nic/cli.hpp"

int main(int argc, char** argv) { return nic::cli_main(argc, argv); }
