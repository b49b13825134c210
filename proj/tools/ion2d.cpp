#include "ion2d/cli.hpp"

int main(int argc, char** argv) { return ion2d::cli::run_cli(argc, argv); }
