#include "expderiv/cli.hpp"

int main(int argc, char** argv) { return expderiv::run_cli(argc, argv); }
