#include "katolab/cli.hpp"

int main(int argc, char** argv) { return katolab::run_cli(argc, argv); }
