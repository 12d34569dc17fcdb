#include "ruvstar/cli.hpp"

int main(int argc, char** argv) { return ruvstar::run_cli(argc, argv); }
