#include "cli.hpp"

int main(int argc, char** argv) { return lsqb::cli::main(argc, argv); }
