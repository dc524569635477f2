#include "shf/cli.hpp"

int main(int argc, char** argv) { return shf::cli::run(argc, argv); }
