#include "cli.hpp"

int main(int argc, char** argv) { return acmm::cli::main(argc, argv); }
