#include "shipctl/cli.hpp"

int main(int argc, char** argv) { return shipctl::cli::run(argc, argv); }
