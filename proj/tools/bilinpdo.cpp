// Experiment runner. See the experiments header for the catalog.
#include <cstdio>

#include "bilinpdo/experiments.hpp"

int main(int argc, char** argv) { return bilinpdo::cli_main(argc, argv); }
