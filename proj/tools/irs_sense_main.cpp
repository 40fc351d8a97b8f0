#include "irssense/experiments.hpp"

int main(int argc, char** argv) { return irs::cli_main(argc, argv); }
