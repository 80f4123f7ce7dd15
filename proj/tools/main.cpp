#include "cli.hpp"

int main(int argc, char** argv) { return opgeom::cli::run(argc, argv); }
